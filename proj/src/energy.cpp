#include "fracac/energy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "fracac/lattice.hpp"
#include "fracac/numerics.hpp"

namespace fracac {

namespace {

double potential_sum(const ScalarField& u, const Mask& mask, const Potential& W) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) acc += W.W(u.values[static_cast<Eigen::Index>(i)]);
  return acc * u.grid.cell_volume();
}

EnergyBreakdown energy_with(const LatticeOperator& op, const ScalarField& u, const BallRegion& region,
                            const Mask& mask, const Potential& W, double epsilon) {
  EnergyBreakdown e;
  e.region = region;
  e.epsilon = epsilon;
  e.sobolev = op.sobolev_energy(u.values, mask);
  e.potential = std::pow(epsilon, -op.spec().order()) * potential_sum(u, mask, W);
  return e;
}

}  // namespace

std::string EnergyBreakdown::to_json() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "{\"region\": {\"center\": [" << region.center.x() << ", " << region.center.y() << ", " << region.center.z()
     << "], \"radius\": " << region.radius << "}, \"epsilon\": " << epsilon << ", \"sobolev\": " << sobolev
     << ", \"potential\": " << potential << ", \"stderr\": " << stderr_sobolev << "}";
  return os.str();
}

double energy_sobolev(const ScalarField& u, const BallRegion& region, const KernelSpec& spec) {
  require_region_inside(u.grid, region);
  const Mask mask = region_mask(u.grid, region);
  const LatticeOperator op(u.grid, spec, mask);
  return op.sobolev_energy(u.values, mask);
}

double energy_potential(const ScalarField& u, const BallRegion& region, const Potential& W, double epsilon,
                        double s) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  require_region_inside(u.grid, region);
  return std::pow(epsilon, -s) * potential_sum(u, region_mask(u.grid, region), W);
}

EnergyBreakdown energy(const ScalarField& u, const BallRegion& region, const KernelSpec& spec, const Potential& W,
                       double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  require_region_inside(u.grid, region);
  const Mask mask = region_mask(u.grid, region);
  const LatticeOperator op(u.grid, spec, mask);
  return energy_with(op, u, region, mask, W, epsilon);
}

namespace {

struct PerimeterParts {
  double perimeter = 0.0;
  double twice_energy = 0.0;
};

PerimeterParts perimeter_parts(const IndicatorSet& E, const BallRegion& region, double s, bool with_energy) {
  require_region_inside(E.grid, region);
  const ScalarField chi = E.characteristic();
  const Grid& g = chi.grid;
  const Mask omega = region_mask(g, region);
  const LatticeOperator op(g, KernelSpec::perimeter(s), omega);
  const std::size_t count = g.node_count();
  Vector out_e(static_cast<Eigen::Index>(count)), out_e_om(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    out_e[e] = E.membership[i] ? 0.0 : 1.0;
    out_e_om[e] = (!E.membership[i] && omega[i]) ? 1.0 : 0.0;
  }
  const Vector c1 = op.convolve(out_e);
  const Vector c2 = op.convolve(out_e_om);
  const Vector& T = op.tail_mass();
  const Vector& S = op.tail_first();
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    if (E.membership[i]) {
      acc += omega[i] ? c1[e] + (T[e] - S[e]) : c2[e];
    } else if (omega[i]) {
      acc += S[e];
    }
  }
  PerimeterParts p;
  p.perimeter = acc * g.cell_volume();
  if (with_energy) p.twice_energy = 2.0 * op.sobolev_energy(chi.values, omega);
  return p;
}

}  // namespace

double fractional_perimeter(const IndicatorSet& E, const BallRegion& region, double s) {
  return perimeter_parts(E, region, s, false).perimeter;
}

PerimeterIdentity perimeter_energy_identity(const IndicatorSet& E, const BallRegion& region, double s) {
  const PerimeterParts p = perimeter_parts(E, region, s, true);
  PerimeterIdentity r;
  r.perimeter = p.perimeter;
  r.twice_energy = p.twice_energy;
  const double scale = std::max(std::abs(p.perimeter), std::abs(p.twice_energy));
  r.residual = scale > 0.0 ? std::abs(p.perimeter - p.twice_energy) / scale : 0.0;
  return r;
}

double cutoff_phi4(double r) {
  if (r <= 2.0) return 1.0;
  if (r >= 4.0) return 0.0;
  return 0.5 * (4.0 - r);
}

Point VariationMap::forward(const Point& y) const { return y + t * cutoff_phi4(y.norm()) * direction; }

Point VariationMap::inverse(const Point& x) const {
  Point y = x;
  for (int it = 0; it < 200; ++it) {
    const Point next = x - t * cutoff_phi4(y.norm()) * direction;
    const double step = (next - y).norm();
    y = next;
    if (step < 1e-15) break;
  }
  return y;
}

ScalarField domain_variation(const ScalarField& u, const VariationMap& map) {
  if (!(std::abs(map.t) < 1.0)) throw ConfigError("variation parameter must satisfy |t| < 1");
  require_region_inside(u.grid, BallRegion{Point::Zero(), 4.0});
  if (map.t == 0.0) return u;
  Vector v(u.values.size());
  const std::size_t count = u.grid.node_count();
  parallel_for(count, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Point x = u.grid.position(i);
      v[static_cast<Eigen::Index>(i)] =
          x.norm() >= 4.0 ? u.values[static_cast<Eigen::Index>(i)] : u.sample(map.inverse(x));
    }
  });
  ScalarField out(u.grid, std::move(v));
  out.range_hint = u.range_hint;
  return out;
}

TranslationComparison translation_comparison(const ScalarField& u, const VariationMap& map, const KernelSpec& spec,
                                             const Potential& W, double epsilon) {
  const BallRegion b4{Point::Zero(), 4.0};
  require_region_inside(u.grid, b4);
  const Mask mask = region_mask(u.grid, b4);
  const LatticeOperator op(u.grid, spec, mask);
  VariationMap minus = map;
  minus.t = -map.t;
  const EnergyBreakdown e0 = energy_with(op, u, b4, mask, W, epsilon);
  const EnergyBreakdown ep = energy_with(op, domain_variation(u, map), b4, mask, W, epsilon);
  const EnergyBreakdown em = energy_with(op, domain_variation(u, minus), b4, mask, W, epsilon);
  TranslationComparison r;
  r.sobolev_part = ep.sobolev + em.sobolev - 2.0 * e0.sobolev;
  r.potential_part = ep.potential + em.potential - 2.0 * e0.potential;
  r.second_difference = r.sobolev_part + r.potential_part;
  const double denom = map.t * map.t * e0.sobolev;
  r.ratio_defined = denom > 0.0;
  r.bound_ratio = r.ratio_defined ? r.second_difference / denom : 0.0;
  return r;
}

double maxmin_identity_check(double ux, double utx, double uy, double uty) {
  const double Mx = std::max(ux, utx), My = std::max(uy, uty);
  const double mx = std::min(ux, utx), my = std::min(uy, uty);
  const double lhs = (Mx - My) * (Mx - My) + (mx - my) * (mx - my) - (ux - uy) * (ux - uy) - (utx - uty) * (utx - uty);
  const double a = ux - utx, b = uy - uty;
  auto pos = [](double v) { return v > 0.0 ? v : 0.0; };
  auto neg = [](double v) { return v < 0.0 ? -v : 0.0; };
  // the x <-> y mirror term is zero whenever the first one is not
  const double rhs = -2.0 * (pos(a) * neg(b) + neg(a) * pos(b));
  return std::abs(lhs - rhs);
}

namespace {

std::vector<Point> half_sphere_directions(int n, int count) {
  std::vector<Point> dirs;
  if (n == 1) {
    dirs.push_back(Point::UnitX());
    return dirs;
  }
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = M_PI * k / count;
      dirs.emplace_back(std::cos(a), std::sin(a), 0.0);
    }
    return dirs;
  }
  // Fibonacci points on the upper hemisphere
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (k + 0.5) / count;
    const double r = std::sqrt(1.0 - z * z);
    dirs.emplace_back(r * std::cos(golden * k), r * std::sin(golden * k), z);
  }
  return dirs;
}

}  // namespace

GradientBound gradient_bound_check(const ScalarField& u, int directions) {
  const Grid& g = u.grid;
  const BallRegion b1{Point::Zero(), 1.0};
  require_region_inside(g, b1, 9.0 * g.h);
  const Mask mask = region_mask(g, b1);
  GradientBound r;
  r.gradient_l1 = gradient_l1_norm(u, b1);
  const double hn = g.cell_volume();
  for (const Point& v : half_sphere_directions(g.dim, directions)) {
    double best = kInf;
    for (int m : {1, 2, 4, 8}) {
      const double t = m * g.h;
      double plus = 0.0, minus = 0.0;
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        const Point x = g.position(i);
        const double d = u.values[static_cast<Eigen::Index>(i)] - u.sample(x - t * v);
        if (d > 0.0)
          plus += d;
        else
          minus -= d;
      }
      best = std::min(best, plus * hn * minus * hn / (t * t));
    }
    r.eta = std::max(r.eta, best);
  }
  r.bound = 2.0 * g.dim * (unit_ball_volume(g.dim - 1) + std::sqrt(r.eta));
  r.holds = r.gradient_l1 <= r.bound;
  return r;
}

}  // namespace fracac
