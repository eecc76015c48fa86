#include "fracac/extension.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "fracac/errors.hpp"
#include "fracac/exterior.hpp"
#include "fracac/numerics.hpp"

namespace fracac {

double extension_constant(double s) {
  if (!(s > 0.0 && s < 2.0)) throw ConfigError("extension constant needs s in (0, 2)");
  return std::pow(2.0, s - 1.0) * std::tgamma(0.5 * s) / std::tgamma(1.0 - 0.5 * s);
}

double extension_multiplier(double s, double t) {
  if (t <= 0.0) return 1.0;
  if (t > 700.0) return 0.0;
  const double nu = 0.5 * s;
  return std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(t, nu) * boost::math::cyl_bessel_k(nu, t);
}

std::array<double, 2> ExtensionField::trace_gap() const {
  std::array<double, 2> gap{0.0, 0.0};
  for (std::size_t j = 0; j < 2 && j < values.size(); ++j) gap[j] = (values[j] - trace.values).cwiseAbs().maxCoeff();
  return gap;
}

double ExtensionField::extrapolated_trace_gap() const {
  const double a = std::pow(y_nodes[0], s), b = std::pow(y_nodes[1], s);
  const Vector lim = (values[0] * b - values[1] * a) / (b - a);
  return (lim - trace.values).cwiseAbs().maxCoeff();
}

std::vector<double> graded_levels(double h, double y_max, double ratio) {
  if (!(ratio > 1.0) || !(y_max > 0.25 * h)) throw ConfigError("level grading needs ratio > 1 and y_max > h/4");
  std::vector<double> y;
  for (double v = 0.25 * h; v < y_max; v *= ratio) y.push_back(v);
  if (y_max - y.back() < 0.25 * (y.back() - (y.size() > 1 ? y[y.size() - 2] : 0.0)))
    y.back() = y_max;
  else
    y.push_back(y_max);
  return y;
}

namespace {

// Mass of the Poisson kernel at height y beyond radius r (one ray direction
// in 1D, all directions otherwise).
double poisson_tail(int n, double s, double y, double r) {
  if (std::isinf(r)) return 0.0;
  const double x = r * r / (r * r + y * y);
  return boost::math::ibetac(0.5 * n, 0.5 * s, x);
}

// 1D cumulative distribution of the kernel.
double poisson_cdf_1d(double s, double y, double t) {
  const double tail = 0.5 * poisson_tail(1, s, y, std::abs(t));
  return t >= 0.0 ? 1.0 - tail : tail;
}

double poisson_density(int n, double s, double y, double r2) {
  // Gamma((n+s)/2) / (pi^{n/2} Gamma(s/2)) y^s (r^2 + y^2)^{-(n+s)/2}
  const double c = std::tgamma(0.5 * (n + s)) / (std::pow(M_PI, 0.5 * n) * std::tgamma(0.5 * s));
  return c * std::pow(y, s) * std::pow(r2 + y * y, -0.5 * (n + s));
}

// Kernel mass of the cell at offset d (lattice units) seen from a node.
double cell_mass(int n, double s, double y, double h, const std::array<int, 3>& d) {
  if (n == 1) return poisson_cdf_1d(s, y, (d[0] + 0.5) * h) - poisson_cdf_1d(s, y, (d[0] - 0.5) * h);
  int dinf = 0;
  for (int a = 0; a < n; ++a) dinf = std::max(dinf, std::abs(d[a]));
  const int sub = dinf <= 2 ? std::clamp(static_cast<int>(std::ceil(3.0 * h / y)), 1, 24) : 1;
  const GaussRule& g = gauss_legendre(4);
  const double w = h / sub;
  double total = 0.0;
  int cells = 1;
  for (int a = 0; a < n; ++a) cells *= sub * 4;
  for (int c = 0; c < cells; ++c) {
    int slot = c;
    double r2 = 0.0, wt = 1.0;
    for (int a = 0; a < n; ++a) {
      const int q = slot % 4;
      slot /= 4;
      const int piece = slot % sub;
      slot /= sub;
      const double z = (d[a] - 0.5) * h + (piece + 0.5 * (1.0 + g.x[q])) * w;
      r2 += z * z;
      wt *= 0.5 * w * g.w[q];
    }
    total += wt * poisson_density(n, s, y, r2);
  }
  return total;
}

Vector level_convolution(const ScalarField& u, double s, double y) {
  const Grid& g = u.grid;
  const int n = g.dim;
  const std::size_t count = g.node_count();
  const Convolver conv(n, g.nodes_per_axis, false,
                       [&](const std::array<int, 3>& d) { return cell_mass(n, s, y, g.h, d); });
  const Vector num_in = conv.apply(u.values);
  const Vector den_in = conv.apply(Vector::Ones(static_cast<Eigen::Index>(count)));
  Vector out(static_cast<Eigen::Index>(count));
  if (n == 1) {
    const double L = g.box_radius;
    const double left = g.boundary.exterior_value(Point(-L - g.h, 0, 0));
    const double right = g.boundary.exterior_value(Point(L + g.h, 0, 0));
    for (std::size_t i = 0; i < count; ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      const double x = g.position(i)[0];
      const double ml = poisson_cdf_1d(s, y, -L - x), mr = 1.0 - poisson_cdf_1d(s, y, L - x);
      out[e] = (num_in[e] + ml * left + mr * right) / (den_in[e] + ml + mr);
    }
    return out;
  }
  const RadialLaw law = poisson_law(n, s, y);
  parallel_for(count, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const ExteriorMoments m = exterior_moments(g, g.position(i), law);
      out[k] = (num_in[k] + m.first) / (den_in[k] + m.mass);
    }
  });
  return out;
}

std::vector<std::complex<double>> forward_transform(const ScalarField& u) {
  const Grid& g = u.grid;
  std::vector<std::complex<double>> data(g.node_count());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = u.values[static_cast<Eigen::Index>(i)];
  fft_nd(data, g.dim, g.nodes_per_axis, false);
  return data;
}

Vector inverse_transform(std::vector<std::complex<double>> data, const Grid& g) {
  fft_nd(data, g.dim, g.nodes_per_axis, true);
  Vector out(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) out[static_cast<Eigen::Index>(i)] = data[i].real();
  return out;
}

// Continuous |xi| and 5-point symbol of each mode.
void mode_symbols(const Grid& g, std::vector<double>& xi, std::vector<double>& lambda) {
  const std::size_t count = g.node_count();
  xi.resize(count);
  lambda.resize(count);
  const int N = g.nodes_per_axis;
  for (std::size_t i = 0; i < count; ++i) {
    const auto idx = g.multi_index(i);
    double x2 = 0.0, l = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double w = M_PI * signed_frequency(idx[a], N) / g.box_radius;
      x2 += w * w;
      l += (2.0 - 2.0 * std::cos(w * g.h)) / (g.h * g.h);
    }
    xi[i] = std::sqrt(x2);
    lambda[i] = l;
  }
}

// Finite volumes on 0 = y_0 < y_1 < ... for -(y^{1-s} m')' + lambda y^{1-s} m = 0,
// m(0) = 1, asymptotic Robin condition at the top. Fluxes are exact for a + b y^s.
std::vector<double> mode_profile(double s, double lambda, const std::vector<double>& y) {
  const std::size_t J = y.size();
  if (lambda <= 0.0) return std::vector<double>(J, 1.0);
  std::vector<double> nodes(J + 1, 0.0);
  for (std::size_t j = 0; j < J; ++j) nodes[j + 1] = y[j];
  auto flux = [&](std::size_t j) { return s / (std::pow(nodes[j + 1], s) - std::pow(nodes[j], s)); };
  auto weight = [&](double lo, double hi) { return (std::pow(hi, 2.0 - s) - std::pow(lo, 2.0 - s)) / (2.0 - s); };
  // unknowns m_1..m_J; tridiagonal a (sub), b (diag), c (super), rhs
  std::vector<double> a(J, 0.0), b(J, 0.0), c(J, 0.0), r(J, 0.0);
  for (std::size_t k = 0; k < J; ++k) {
    const std::size_t j = k + 1;
    const double lo = 0.5 * (nodes[j - 1] + nodes[j]);
    const double fl = flux(j - 1);
    if (j < J) {
      const double hi = 0.5 * (nodes[j] + nodes[j + 1]);
      const double fr = flux(j);
      b[k] = fl + fr + lambda * weight(lo, hi);
      c[k] = -fr;
    } else {
      const double top = nodes[J];
      const double kappa = -std::sqrt(lambda) + (s - 1.0) / (2.0 * top);
      b[k] = fl + lambda * weight(lo, top) - std::pow(top, 1.0 - s) * kappa;
    }
    if (k > 0)
      a[k] = -fl;
    else
      r[k] = fl;  // m_0 = 1
  }
  for (std::size_t k = 1; k < J; ++k) {
    const double f = a[k] / b[k - 1];
    b[k] -= f * c[k - 1];
    r[k] -= f * r[k - 1];
  }
  std::vector<double> m(J);
  m[J - 1] = r[J - 1] / b[J - 1];
  for (std::size_t k = J - 1; k-- > 0;) m[k] = (r[k] - c[k] * m[k + 1]) / b[k];
  return m;
}

}  // namespace

ExtensionField extend_on_levels(const ScalarField& u, double s, std::vector<double> y_nodes,
                                ExtensionBackend backend) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("extension needs s in (0, 1)");
  if (y_nodes.size() < 2) throw ConfigError("extension needs at least two levels");
  for (std::size_t j = 0; j < y_nodes.size(); ++j)
    if (!(y_nodes[j] > 0.0) || (j > 0 && !(y_nodes[j] > y_nodes[j - 1])))
      throw ConfigError("extension levels must be positive and increasing");
  const Grid& g = u.grid;
  if (g.boundary.kind == BoundaryKind::exterior_field)
    throw ConfigError("extension needs a periodic or exterior-constant model");
  if (!u.values.allFinite()) throw ConfigError("extension needs a bounded field");
  ExtensionField U;
  U.base_grid = g;
  U.trace = u;
  U.y_nodes = y_nodes;
  U.s = s;
  U.d_s = extension_constant(s);
  U.values.resize(y_nodes.size());
  if (g.periodic()) {
    const auto hat = forward_transform(u);
    std::vector<double> xi, lambda;
    mode_symbols(g, xi, lambda);
    std::vector<std::vector<double>> prof;
    if (backend == ExtensionBackend::five_point) {
      prof.resize(hat.size());
      parallel_for(hat.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) prof[k] = mode_profile(s, lambda[k], y_nodes);
      });
    }
    parallel_for(y_nodes.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t j = b; j < e; ++j) {
        auto level = hat;
        for (std::size_t k = 0; k < level.size(); ++k)
          level[k] *= backend == ExtensionBackend::five_point ? prof[k][j] : extension_multiplier(s, xi[k] * y_nodes[j]);
        U.values[j] = inverse_transform(std::move(level), g);
      }
    });
  } else {
    if (backend == ExtensionBackend::five_point) throw ConfigError("five-point extension backend needs a periodic grid");
    for (std::size_t j = 0; j < y_nodes.size(); ++j) U.values[j] = level_convolution(u, s, y_nodes[j]);
  }
  const double osc = u.values.maxCoeff() - u.values.minCoeff();
  if (osc > 0.0 && U.extrapolated_trace_gap() > 0.01 * osc)
    throw NumericalError("insufficient y resolution: the smallest levels miss the trace by more than 1%");
  return U;
}

ExtensionField extend(const ScalarField& u, double s, double y_max, int levels, ExtensionBackend backend) {
  std::vector<double> y = graded_levels(u.grid.h, y_max);
  if (levels > 0) {
    const double ratio = std::pow(y_max / (0.25 * u.grid.h), 1.0 / (levels - 1));
    y.clear();
    for (int j = 0; j < levels; ++j) y.push_back(0.25 * u.grid.h * std::pow(ratio, j));
    y.back() = y_max;
  }
  return extend_on_levels(u, s, std::move(y), backend);
}

NeumannCheck neumann_trace_check(const ExtensionField& U, const Potential& W, double epsilon) {
  const Grid& g = U.base_grid;
  const double s = U.s;
  const double y0 = U.y_nodes[0], y1 = U.y_nodes[1];
  // cell data: the other cells carry y^s times a series in y^2, hence rate 2
  const Vector g0 = s * (U.values[0] - U.trace.values) / std::pow(y0, s);
  const Vector g1 = s * (U.values[1] - U.trace.values) / std::pow(y1, s);
  const Vector lim = (g0 * (y1 * y1) - g1 * (y0 * y0)) / (y1 * y1 - y0 * y0);
  double scale = 0.0;
  for (int k = 0; k <= 200; ++k) scale = std::max(scale, std::abs(W.dW(-1.0 + 0.01 * k)));
  const double weight = std::pow(epsilon, -s);
  Vector res(lim.size());
  for (Eigen::Index i = 0; i < res.size(); ++i)
    res[i] = std::abs(U.d_s * lim[i] - weight * W.dW(U.trace.values[i])) / (weight * scale);
  NeumannCheck out;
  out.residual = ScalarField(g, res);
  const Mask inner = region_mask(g, BallRegion{Point::Zero(), 0.5 * g.box_radius});
  for (Eigen::Index i = 0; i < res.size(); ++i)
    if (inner[static_cast<std::size_t>(i)]) out.sup_inner = std::max(out.sup_inner, res[i]);
  return out;
}

namespace {

// Per node, the mean over axes' two adjacent edges of the squared edge
// difference quotient (the 5-point Dirichlet energy density).
std::vector<double> edge_energy_density(const Grid& g, const Vector& v) {
  const std::size_t count = g.node_count();
  const int N = g.nodes_per_axis;
  std::vector<double> out(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const auto idx = g.multi_index(i);
    const double vi = v[static_cast<Eigen::Index>(i)];
    for (int a = 0; a < g.dim; ++a) {
      double acc = 0.0;
      int edges = 0;
      for (int step : {-1, 1}) {
        auto j = idx;
        j[a] += step;
        if (g.periodic())
          j[a] = (j[a] + N) % N;
        else if (j[a] < 0 || j[a] >= N)
          continue;
        const double d = (v[static_cast<Eigen::Index>(g.linear_index(j))] - vi) / g.h;
        acc += d * d;
        ++edges;
      }
      if (edges > 0) out[i] += acc / edges;
    }
  }
  return out;
}

// int_lo^hi y^{p} dy
double power_moment(double p, double lo, double hi) {
  return (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / (p + 1.0);
}

}  // namespace

ExtensionEnergy extension_energy(const ExtensionField& U, double R, const Potential& W, int stride) {
  const Grid& g = U.base_grid;
  if (!(R > 0.0)) throw ConfigError("extension energy needs R > 0");
  if (R + g.h > g.box_radius || R > U.y_nodes.back())
    throw OutOfDomain("half ball of radius R does not fit in the extension box");
  if (stride < 1) throw ConfigError("level stride must be positive");
  const double s = U.s;
  const double q = 1.0 - s;
  std::vector<std::size_t> used;
  for (std::size_t j = 0; j < U.levels(); j += static_cast<std::size_t>(stride)) used.push_back(j);
  if (used.back() != U.levels() - 1) used.push_back(U.levels() - 1);
  std::vector<std::vector<double>> grads(used.size());
  for (std::size_t k = 0; k < used.size(); ++k) grads[k] = edge_energy_density(g, U.values[used[k]]);
  const std::vector<double> grad0 = edge_energy_density(g, U.trace.values);
  const std::size_t count = g.node_count();
  ExtensionEnergy e;
  double grad_sum = 0.0, pot_sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double r2 = g.position(i).squaredNorm();
    if (r2 >= R * R) continue;
    const auto ei = static_cast<Eigen::Index>(i);
    pot_sum += W.W(U.trace.values[ei]);
    const double top = std::sqrt(R * R - r2);
    // strip below the first level: U = u + c y^s
    const double y0 = U.y_nodes[used[0]];
    const double b0 = std::min(y0, top);
    const double c = (U.values[used[0]][ei] - U.trace.values[ei]) / std::pow(y0, s);
    double acc = c * c * s * std::pow(b0, s);
    acc += 0.5 * (grad0[i] + grads[0][i]) * power_moment(q, 0.0, b0);
    for (std::size_t k = 0; k + 1 < used.size(); ++k) {
      const double ya = U.y_nodes[used[k]], yb = U.y_nodes[used[k + 1]];
      if (ya >= top) break;
      const double hi = std::min(yb, top);
      const double dy = (U.values[used[k + 1]][ei] - U.values[used[k]][ei]) / (yb - ya);
      const double m0 = power_moment(q, ya, hi);
      // linear weights (1 - tau), tau with tau = (y - ya) / (yb - ya)
      const double m1 = (power_moment(q + 1.0, ya, hi) - ya * m0) / (yb - ya);
      acc += dy * dy * m0 + grads[k][i] * (m0 - m1) + grads[k + 1][i] * m1;
    }
    grad_sum += acc;
  }
  e.gradient = 0.5 * U.d_s * grad_sum * g.cell_volume();
  e.potential = pot_sum * g.cell_volume();
  return e;
}

std::string MonotonicityTrace::to_csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "R,phi,error_bar\n";
  for (std::size_t k = 0; k < radii.size(); ++k) os << radii[k] << ',' << phi_values[k] << ',' << error_bars[k] << '\n';
  return os.str();
}

double MonotonicityTrace::relative_spread() const {
  if (phi_values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(phi_values.begin(), phi_values.end());
  double mean = 0.0;
  for (double v : phi_values) mean += v;
  mean /= static_cast<double>(phi_values.size());
  return mean != 0.0 ? (*hi - *lo) / std::abs(mean) : 0.0;
}

MonotonicityTrace monotonicity_trace(const ExtensionField& U, const std::vector<double>& radii, const Potential& W) {
  MonotonicityTrace t;
  const int n = U.base_grid.dim;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (k > 0 && !(radii[k] > radii[k - 1])) throw ConfigError("monotonicity radii must increase");
    const double R = radii[k];
    const double scale = std::pow(R, U.s - n);
    const double fine = scale * extension_energy(U, R, W, 1).total();
    const double coarse = scale * extension_energy(U, R, W, 2).total();
    t.radii.push_back(R);
    t.phi_values.push_back(fine);
    t.error_bars.push_back(std::abs(fine - coarse));
  }
  for (std::size_t k = 0; k + 1 < t.radii.size(); ++k) {
    const double drop = t.phi_values[k] - t.phi_values[k + 1];
    if (drop > t.error_bars[k] + t.error_bars[k + 1]) t.violations.push_back({t.radii[k], t.radii[k + 1], drop});
  }
  return t;
}

}  // namespace fracac
