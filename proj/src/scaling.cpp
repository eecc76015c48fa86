#include "fracac/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fracac/energy.hpp"
#include "fracac/errors.hpp"
#include "fracac/numerics.hpp"
#include "fracac/solver.hpp"

namespace fracac {

std::string ScalingExperiment::to_csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "abscissa,value,error_bar\n";
  for (std::size_t k = 0; k < abscissae.size(); ++k)
    os << abscissae[k] << ',' << values[k] << ',' << (k < error_bars.size() ? error_bars[k] : 0.0) << '\n';
  return os.str();
}

FitResult fit_loglog(const ScalingExperiment& e, std::size_t first, std::size_t last) {
  if (e.abscissae.size() != e.values.size()) throw ConfigError("scaling trace lengths differ");
  if (last == std::size_t(-1)) last = e.values.empty() ? 0 : e.values.size() - 1;
  if (e.values.empty() || first > last || last >= e.values.size()) throw ConfigError("empty fit window");
  FitResult f;
  f.first = first;
  f.last = last;
  if (std::all_of(e.values.begin() + first, e.values.begin() + last + 1, [](double v) { return v == 0.0; })) {
    f.degenerate = true;
    return f;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double m = static_cast<double>(last - first + 1);
  for (std::size_t k = first; k <= last; ++k) {
    if (!(e.abscissae[k] > 0.0) || !(e.values[k] > 0.0)) throw ConfigError("log-log fit needs positive data");
    const double x = std::log(e.abscissae[k]), y = std::log(e.values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / m, vy = syy - sy * sy / m, cxy = sxy - sx * sy / m;
  if (vx <= 0.0) throw ConfigError("log-log fit needs two distinct abscissae");
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / m;
  f.r_squared = vy > 0.0 ? std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0) : 1.0;
  return f;
}

FitResult fit_interior(const ScalingExperiment& e) {
  if (e.values.size() < 4) throw ConfigError("interior fit window needs at least four radii");
  return fit_loglog(e, 1, e.values.size() - 2);
}

namespace {

ScalingExperiment trace(const std::string& name, const std::vector<double>& radii,
                        const std::function<double(double)>& value) {
  ScalingExperiment e;
  e.quantity_name = name;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (k > 0 && !(radii[k] > radii[k - 1])) throw ConfigError("radii must increase");
    e.abscissae.push_back(radii[k]);
    e.values.push_back(value(radii[k]));
    e.error_bars.push_back(0.0);  // exact lattice sums
  }
  return e;
}

}  // namespace

ScalingExperiment bv_scaling(const ScalarField& u, const std::vector<double>& radii) {
  return trace("bv", radii, [&](double R) { return gradient_l1_norm(u, BallRegion{Point::Zero(), R}); });
}

ScalingExperiment sobolev_scaling(const ScalarField& u, const std::vector<double>& radii, const KernelSpec& spec) {
  return trace("sobolev", radii, [&](double R) { return energy_sobolev(u, BallRegion{Point::Zero(), R}, spec); });
}

ScalingExperiment full_energy_scaling(const ScalarField& u, const std::vector<double>& radii, const KernelSpec& spec,
                                      const Potential& W, double epsilon) {
  return trace("energy", radii,
               [&](double R) { return energy(u, BallRegion{Point::Zero(), R}, spec, W, epsilon).total(); });
}

RatioReport pot_vs_sob(const ScalarField& u, const std::vector<double>& radii, double R0, const KernelSpec& spec,
                       const Potential& W, double epsilon) {
  const bool classical = spec.kind == KernelKind::classical;
  const int n = u.grid.dim;
  RatioReport r;
  r.ratios.quantity_name = classical ? "pot_vs_sob_classical" : "pot_vs_sob";
  for (double R : radii) {
    if (!(R > R0)) throw ConfigError("pot_vs_sob needs every radius above R0");
    const double pot = energy_potential(u, BallRegion{Point::Zero(), R - R0}, W, epsilon, spec.order());
    const double sob = classical ? energy_sobolev(u, BallRegion{Point::Zero(), R + 1.0}, spec) + std::pow(R, n - 1)
                                 : energy_sobolev(u, BallRegion{Point::Zero(), R}, spec);
    if (sob == 0.0) {
      r.degenerate = true;
      if (pot != 0.0) throw NumericalError("vanishing Sobolev energy with nonzero potential energy");
      r.ratios.abscissae.push_back(R);
      r.ratios.values.push_back(0.0);
      r.ratios.error_bars.push_back(0.0);
      continue;
    }
    r.ratios.abscissae.push_back(R);
    r.ratios.values.push_back(pot / sob);
    r.ratios.error_bars.push_back(0.0);
  }
  if (r.degenerate) return r;
  r.max_ratio = *std::max_element(r.ratios.values.begin(), r.ratios.values.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double x = std::log(radii[k]), y = r.ratios.values[k];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double vx = sxx - sx * sx / m;
  r.trend_slope = vx > 0.0 ? (sxy - sx * sy / m) / vx : 0.0;
  return r;
}

double potential_decay_exponent(double s) { return std::min(0.5 * (1.0 - s), s); }

ScalingExperiment potential_decay(double s, const std::vector<double>& eps_list, double box, double h_unit) {
  ScalingExperiment e;
  e.quantity_name = "potential_decay";
  const Potential W = Potential::quartic();
  for (double eps : eps_list) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("potential decay needs 0 < eps <= 1");
    const double L = box / eps;
    const double rounded = std::round(L / h_unit) * h_unit;
    const SolveResult res = solve_layer_1d(s, rounded, h_unit, 1e-10);
    // eps^{-s} int_{-1}^{1} W(u_eps(x)) dx = eps^{1-s} int_{|z| < 1/eps} W(phi(z)) dz
    const double value = std::pow(eps, 1.0 - s) *
                         energy_potential(res.field, BallRegion{Point::Zero(), 1.0 / eps}, W, 1.0, s);
    e.abscissae.push_back(eps);
    e.values.push_back(value);
    e.error_bars.push_back(res.residual_sup);
  }
  return e;
}

DecayFit layer_decay(const ScalarField& profile) {
  const Grid& g = profile.grid;
  if (g.dim != 1) throw UnsupportedDimension("layer decay needs a 1D profile");
  if (g.box_radius < 20.0) throw ConfigError("layer decay needs box_radius >= 20");
  ScalingExperiment e;
  e.quantity_name = "layer_decay";
  const double lo = 0.25 * g.box_radius, hi = 0.5 * g.box_radius;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double x = g.position(i)[0];
    if (x < lo || x > hi) continue;
    const double right = 1.0 - profile.values[static_cast<Eigen::Index>(i)];
    const double left = 1.0 + profile.sample(Point(-x, 0, 0));
    e.abscissae.push_back(x);
    e.values.push_back(0.5 * (right + left));
  }
  DecayFit d;
  d.fit = fit_loglog(e);
  d.inconclusive = d.fit.r_squared < 0.9;
  return d;
}

std::string to_string(DensityOutcome o) {
  switch (o) {
    case DensityOutcome::vacuous:
      return "vacuous";
    case DensityOutcome::holds:
      return "holds";
    case DensityOutcome::counterexample:
      return "counterexample";
  }
  return "unknown";
}

DensityReport density_check(const ScalarField& u, double R, const DensityCheckConfig& config) {
  const Grid& g = u.grid;
  if (!(config.c_bar > 0.0 && config.c_bar < 1.0)) throw ConfigError("density check needs 0 < c_bar < 1");
  if (!(config.omega0 > 0.0 && config.omega0 < unit_ball_volume(g.dim) * std::pow(0.5, g.dim)))
    throw ConfigError("density check needs 0 < omega0 < |B_{1/2}|");
  if (!(config.R0 > 0.0)) throw ConfigError("density check needs R0 > 0");
  if (R < config.R0) throw ConfigError("density check needs R >= R0");
  const BallRegion ball{Point::Zero(), R};
  require_region_inside(g, ball);
  const Mask full = region_mask(g, ball);
  const Mask half = region_mask(g, BallRegion{Point::Zero(), 0.5 * R});
  auto side = [&](double sign, double& hypothesis, double& sup) {
    double acc = 0.0;
    sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < full.size(); ++i) {
      const double v = sign * u.values[static_cast<Eigen::Index>(i)];
      if (full[i]) acc += std::abs(1.0 + v);
      if (half[i]) sup = std::max(sup, v);
    }
    hypothesis = acc * g.cell_volume() / std::pow(R, g.dim);
    if (hypothesis > config.omega0) return DensityOutcome::vacuous;
    return sup < -config.c_bar ? DensityOutcome::holds : DensityOutcome::counterexample;
  };
  DensityReport r;
  double hyp_plus = 0.0, sup_plus = 0.0;
  r.minus_side = side(1.0, r.hypothesis_value, r.sup_half);
  r.plus_side = side(-1.0, hyp_plus, sup_plus);
  return r;
}

namespace {

struct BallSample {
  std::vector<Point> x;
  std::vector<double> u;
};

BallSample ball_sample(const ScalarField& u, double R) {
  BallSample b;
  const Mask m = region_mask(u.grid, BallRegion{Point::Zero(), R});
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    b.x.push_back(u.grid.position(i));
    b.u.push_back(u.values[static_cast<Eigen::Index>(i)]);
  }
  return b;
}

// Smallest a with {e.x <= -aR} in {u <= c_low} and {u <= c_high} in {e.x <= aR}.
double trapping(const BallSample& b, const Point& e, double R, double c_low, double c_high) {
  double a = 0.0;
  for (std::size_t k = 0; k < b.x.size(); ++k) {
    const double p = e.dot(b.x[k]) / R;
    if (b.u[k] > c_low) a = std::max(a, -p);
    if (b.u[k] <= c_high) a = std::max(a, p);
  }
  return std::min(a, 1.0);
}

Point direction_2d(double theta) { return Point(std::cos(theta), std::sin(theta), 0.0); }

Point direction_3d(double theta, double phi) {
  return Point(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

template <class F>
double golden_section(F f, double lo, double hi, int steps = 40) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int k = 0; k < steps; ++k) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

FlatnessPoint flatness_at(const ScalarField& u, double R, double c_low, double c_high) {
  const BallSample b = ball_sample(u, R);
  const bool low = std::any_of(b.u.begin(), b.u.end(), [&](double v) { return v <= c_low; });
  const bool high = std::any_of(b.u.begin(), b.u.end(), [&](double v) { return v > c_high; });
  if (!low || !high) throw ConfigError("flatness needs both level sets inside B_R");
  FlatnessPoint best;
  best.R = R;
  best.a = 2.0;
  auto consider = [&](const Point& e) {
    const double a = trapping(b, e, R, c_low, c_high);
    if (a < best.a) {
      best.a = a;
      best.direction = e;
    }
  };
  const int n = u.grid.dim;
  if (n == 1) {
    consider(Point::UnitX());
    consider(-Point::UnitX());
    return best;
  }
  if (n == 2) {
    const int sweep = 64;
    const double step = 2.0 * M_PI / sweep;
    for (int k = 0; k < sweep; ++k) consider(direction_2d(k * step));
    const double theta0 = std::atan2(best.direction[1], best.direction[0]);
    consider(direction_2d(golden_section(
        [&](double th) { return trapping(b, direction_2d(th), R, c_low, c_high); }, theta0 - step, theta0 + step)));
    return best;
  }
  // Fibonacci sphere, then alternating golden sections in the two angles.
  const int sweep = 256;
  const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
  double theta = 0.0, phi = 0.0;
  for (int k = 0; k < sweep; ++k) {
    const double th = std::acos(1.0 - 2.0 * (k + 0.5) / sweep), ph = golden_angle * k;
    const double before = best.a;
    consider(direction_3d(th, ph));
    if (best.a < before) {
      theta = th;
      phi = ph;
    }
  }
  const double width = std::sqrt(4.0 * M_PI / sweep);
  for (int round = 0; round < 3; ++round) {
    theta = golden_section([&](double th) { return trapping(b, direction_3d(th, phi), R, c_low, c_high); },
                           theta - width, theta + width);
    phi = golden_section([&](double ph) { return trapping(b, direction_3d(theta, ph), R, c_low, c_high); },
                         phi - width, phi + width);
  }
  consider(direction_3d(theta, phi));
  return best;
}

}  // namespace

std::vector<FlatnessPoint> flatness_profile(const ScalarField& u, const std::vector<double>& R_list, double c_low,
                                            double c_high) {
  if (!(c_low <= c_high)) throw ConfigError("flatness needs c_low <= c_high");
  std::vector<FlatnessPoint> out;
  for (double R : R_list) {
    if (!(R > 0.0)) throw ConfigError("flatness radii must be positive");
    require_region_inside(u.grid, BallRegion{Point::Zero(), R});
    out.push_back(flatness_at(u, R, c_low, c_high));
  }
  return out;
}

double BlowdownTrace::normal_angle_deg(const Point& reference) const {
  const double c = std::clamp(normal.dot(reference) / (normal.norm() * reference.norm()), -1.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

BlowdownTrace blowdown_convergence(const ScalarField& u, const std::vector<double>& R_list, double c,
                                   double sample_h) {
  if (R_list.empty()) throw ConfigError("blow-down needs at least one radius");
  const Grid target = make_grid(u.grid.dim, 1.0 + 4.0 * sample_h, sample_h, BoundaryModel::constant(0.0));
  const double R_max = *std::max_element(R_list.begin(), R_list.end());
  require_region_inside(u.grid, BallRegion{Point::Zero(), R_max});
  BlowdownTrace t;
  t.normal = flatness_profile(u, {R_max}).front().direction;
  const BallRegion unit{Point::Zero(), 1.0};
  Mask half(target.node_count(), 0);
  Vector sign(static_cast<Eigen::Index>(target.node_count()));
  for (std::size_t i = 0; i < target.node_count(); ++i) {
    const double p = t.normal.dot(target.position(i));
    half[i] = p >= 0.0;
    sign[static_cast<Eigen::Index>(i)] = p > 0.0 ? 1.0 : (p < 0.0 ? -1.0 : 0.0);
  }
  const ScalarField sign_field(target, sign);
  const IndicatorSet half_space = superlevel_from_mask(target, half);
  for (double R : R_list) {
    const ScalarField uR = rescale_blowdown(u, R, target);
    const double hd = hausdorff_distance(level_set(uR, c), half_space, unit);
    if (!std::isfinite(hd)) throw NumericalError("blow-down level set is empty in B_1");
    t.radii.push_back(R);
    t.l1.push_back(l1_distance(uR, sign_field, unit));
    t.hausdorff.push_back(hd);
  }
  return t;
}

InterpolationRatio interpolation_check(const ScalarField& u, double R, double s) {
  const Grid& g = u.grid;
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("interpolation check needs 0 < s < 1");
  const BallRegion ball{Point::Zero(), R};
  require_region_inside(g, ball, g.h);
  const int n = g.dim;
  const Mask m = region_mask(g, ball);
  std::vector<std::array<int, 3>> idx;
  std::vector<double> val;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    idx.push_back(g.multi_index(i));
    val.push_back(u.values[static_cast<Eigen::Index>(i)]);
  }
  // |x - y|^{-n-s} by absolute offset
  const std::size_t D = static_cast<std::size_t>(std::ceil(2.0 * R / g.h)) + 2;
  const std::size_t s1 = D, s2 = D * (n > 1 ? D : 1);
  std::vector<double> table(s2 * (n > 2 ? D : 1), 0.0);
  for (std::size_t k = 1; k < table.size(); ++k) {
    const double a = static_cast<double>(k % D), b = static_cast<double>((k / s1) % D),
                 c = static_cast<double>(k / s2);
    table[k] = std::pow(g.h * std::sqrt(a * a + b * b + c * c), -n - s);
  }
  auto dist = [](int a, int b) { return static_cast<std::size_t>(std::abs(a - b)); };
  double acc = 0.0;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    for (std::size_t q = p + 1; q < idx.size(); ++q) {
      const std::size_t k =
          dist(idx[p][0], idx[q][0]) + s1 * dist(idx[p][1], idx[q][1]) + s2 * dist(idx[p][2], idx[q][2]);
      acc += std::abs(val[p] - val[q]) * table[k];
    }
  }
  const double vol = g.cell_volume();
  InterpolationRatio r;
  r.lhs = std::pow(R, s - n) * 2.0 * acc * vol * vol;
  double vp = 0.0, vm = 0.0;
  for (double v : val) {
    vp += std::abs(v + 1.0);
    vm += std::abs(v - 1.0);
  }
  r.V = std::min(vp, vm) * vol / std::pow(R, n);
  r.P = std::pow(R, 1 - n) * gradient_l1_norm(u, ball);
  if (r.V == 0.0 || r.P == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.ratio = r.lhs / (std::pow(r.V, 1.0 - s) * std::pow(r.P, s));
  return r;
}

std::vector<ScalarField> random_smooth_fields(const Grid& g, int count, unsigned seed) {
  if (count < 0) throw ConfigError("field count must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int modes = 6;
  const double k_max = 2.0 * M_PI / g.box_radius;
  std::vector<ScalarField> out;
  for (int f = 0; f < count; ++f) {
    std::vector<Point> k(modes, Point::Zero());
    std::vector<double> phase(modes), coef(modes);
    for (int j = 0; j < modes; ++j) {
      for (int a = 0; a < g.dim; ++a) k[j][a] = k_max * (2.0 * unit(rng) - 1.0);
      phase[j] = 2.0 * M_PI * unit(rng);
      coef[j] = 2.0 * unit(rng) - 1.0;
    }
    const double amplitude = 1.0 + 3.0 * unit(rng);
    const double offset = unit(rng) - 0.5;
    out.push_back(ScalarField::from_function(g, [&](const Point& x) {
      double acc = 0.0;
      for (int j = 0; j < modes; ++j) acc += coef[j] * std::cos(k[j].dot(x) + phase[j]);
      return std::tanh(amplitude * acc / std::sqrt(static_cast<double>(modes)) + offset);
    }));
  }
  return out;
}

}  // namespace fracac
