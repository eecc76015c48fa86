#include "fracac/stability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "fracac/errors.hpp"
#include "fracac/exterior.hpp"
#include "fracac/numerics.hpp"
#include "fracac/solver.hpp"

namespace fracac {

double second_variation(const ScalarField& u, const ScalarField& xi, const KernelSpec& spec, const Potential& W,
                        double epsilon) {
  if (!u.grid.same_lattice(xi.grid)) throw GridMismatch("second_variation fields on different grids");
  const LatticeOperator op(u.grid, spec);
  const double weight = std::pow(epsilon, -spec.order());
  double pot = 0.0;
  for (Eigen::Index i = 0; i < u.values.size(); ++i) pot += W.ddW(u.values[i]) * xi.values[i] * xi.values[i];
  return u.grid.cell_volume() * (xi.values.dot(op.apply_homogeneous(xi.values)) + weight * pot);
}

StabilityReport min_rayleigh(const ScalarField& u, const BallRegion& region, const KernelSpec& spec,
                             const Potential& W, double epsilon, int iterations) {
  const Grid& g = u.grid;
  require_region_inside(g, region, g.h);
  const Mask mask = region_mask(g, region);
  Vector sel = Vector::Zero(u.values.size());
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) sel[static_cast<Eigen::Index>(i)] = 1.0;
  const Eigen::Index dim = static_cast<Eigen::Index>(sel.sum());
  if (dim == 0) throw ConfigError("stability region contains no nodes");
  const LatticeOperator op(g, spec);
  Vector curv(u.values.size());
  const double weight = std::pow(epsilon, -spec.order());
  for (Eigen::Index i = 0; i < curv.size(); ++i) curv[i] = weight * W.ddW(u.values[i]);
  auto A = [&](const Vector& v) {
    const Vector m = v.cwiseProduct(sel);
    return Vector((op.apply_homogeneous(m) + curv.cwiseProduct(m)).cwiseProduct(sel));
  };

  StabilityReport rep;
  rep.region = region;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  Vector start(u.values.size());
  for (Eigen::Index i = 0; i < start.size(); ++i) start[i] = normal(rng);
  start = start.cwiseProduct(sel).normalized();

  const int m_max = static_cast<int>(std::min<Eigen::Index>(iterations, dim));
  Vector best = start;
  double theta = 0.0;
  for (int restart = 0; restart < 60; ++restart) {
    std::vector<Vector> V;
    std::vector<double> alpha, beta;
    V.push_back(start);
    for (int j = 0; j < m_max; ++j) {
      Vector w = A(V[j]);
      alpha.push_back(V[j].dot(w));
      for (int pass = 0; pass < 2; ++pass)
        for (const Vector& q : V) w -= q.dot(w) * q;
      const double b = w.norm();
      ++rep.iterations;
      if (j + 1 == m_max || b < 1e-12) break;
      beta.push_back(b);
      V.push_back(w / b);
    }
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    best = Vector::Zero(u.values.size());
    for (int j = 0; j < m; ++j) best += y[j] * V[j];
    best.normalize();
    const Vector Ab = A(best);
    theta = best.dot(Ab);
    rep.residual = (Ab - theta * best).norm();
    if (rep.residual < 1e-9 * std::max(1.0, std::abs(theta)) || m == dim) {
      rep.converged = true;
      break;
    }
    start = best;
  }
  rep.min_rayleigh = theta;
  rep.witness = ScalarField(g, best / std::sqrt(g.cell_volume()));
  return rep;
}

double cutoff_xi(double r) {
  if (r <= 2.0) return 1.0;
  if (r >= 3.0) return 0.0;
  auto f = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = f(3.0 - r), b = f(r - 2.0);
  return a / (a + b);
}

double cutoff_psi(const Point& x, int n) {
  const double planar = n == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
  return cutoff_xi(planar) * (n == 3 ? cutoff_xi(std::abs(x[2])) : 1.0);
}

namespace {

constexpr double kConvergedResidual = 1e-4;

double residual_on(const ScalarField& u, const KernelSpec& spec, const Potential& W, double epsilon,
                   const Mask& where) {
  const LatticeOperator op(u.grid, spec);
  const Vector r = euler_lagrange(op, u.values, W, epsilon);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (where.empty() || where[static_cast<std::size_t>(i)]) worst = std::max(worst, std::abs(r[i]));
  return worst;
}

// gn = |grad u| and nu the unit normal (0 where gn = 0) at every node.
GradientTest gradient_pair_sums(const Grid& g, const std::vector<double>& gn, const std::vector<Point>& nu, double s) {
  const int n = g.dim;
  if (n < 2) throw UnsupportedDimension("gradient test needs n >= 2");
  require_region_inside(g, BallRegion{Point::Zero(), n == 3 ? 3.0 * std::sqrt(2.0) : 3.0}, g.h);
  const std::size_t count = g.node_count();
  std::vector<double> psi(count);
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < count; ++i) {
    psi[i] = cutoff_psi(g.position(i), n);
    if (psi[i] > 0.0) support.push_back(i);
  }
  // kernel by offset, bare |z|^{-n-s}
  const int N = g.nodes_per_axis;
  const int P = 2 * N - 1;
  std::vector<double> ktab(static_cast<std::size_t>(std::pow(P, n)));
  for (std::size_t k = 0; k < ktab.size(); ++k) {
    std::size_t rem = k;
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double d = static_cast<double>(rem % P) - (N - 1);
      rem /= P;
      r2 += d * d;
    }
    ktab[k] = r2 > 0.0 ? std::pow(r2 * g.h * g.h, -0.5 * (n + s)) : 0.0;
  }
  const double h2n = g.cell_volume() * g.cell_volume();
  std::vector<double> i2(support.size()), i3(support.size());
  parallel_for(support.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const std::size_t x = support[k];
      const auto ix = g.multi_index(x);
      double a2 = 0.0, a3 = 0.0;
      if (gn[x] == 0.0) continue;
      for (std::size_t y = 0; y < count; ++y) {
        if (gn[y] == 0.0 || y == x) continue;
        const auto iy = g.multi_index(y);
        std::size_t off = 0;
        for (int a = n - 1; a >= 0; --a) off = off * P + static_cast<std::size_t>(ix[a] - iy[a] + N - 1);
        const double kw = ktab[off] * gn[x] * gn[y];
        a2 += (nu[x] - nu[y]).squaredNorm() * psi[x] * psi[x] * kw;
        const double dpsi = psi[x] - psi[y];
        a3 += dpsi * dpsi * kw * (psi[y] > 0.0 ? 1.0 : 2.0);
      }
      i2[k] = a2;
      i3[k] = a3;
    }
  });
  GradientTest r;
  for (std::size_t k = 0; k < support.size(); ++k) {
    r.I2 += i2[k];
    r.I3 += i3[k];
  }
  r.I2 *= h2n;
  r.I3 *= h2n;
  return r;
}

}  // namespace

GradientTest gradient_test_inequality(const ScalarField& u, const KernelSpec& spec, const Potential& W,
                                      double epsilon) {
  if (u.grid.dim < 2) throw UnsupportedDimension("gradient test needs n >= 2");
  if (residual_on(u, spec, W, epsilon, {}) > kConvergedResidual)
    throw PreconditionError("gradient test needs a converged solution (residual <= 1e-4)");
  const std::vector<Point> grad = central_gradient(u);
  std::vector<double> gn(grad.size());
  std::vector<Point> nu(grad.size(), Point::Zero());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    gn[i] = grad[i].norm();
    if (gn[i] > 0.0) nu[i] = grad[i] / gn[i];
  }
  return gradient_pair_sums(u.grid, gn, nu, spec.s);
}

GradientTest gradient_test_embedded(const ScalarField& profile, const Point& direction, const Grid& grid,
                                    const KernelSpec& spec, const Potential& W, double epsilon) {
  if (profile.grid.dim != 1) throw ConfigError("embedded gradient test needs a 1D profile");
  if (grid.dim < 2) throw UnsupportedDimension("gradient test needs n >= 2");
  const BallRegion inner{Point::Zero(), 0.5 * profile.grid.box_radius};
  if (residual_on(profile, spec, W, epsilon, region_mask(profile.grid, inner)) > kConvergedResidual)
    throw PreconditionError("gradient test needs a converged profile (residual <= 1e-4)");
  // grad p(e.x) = p'(e.x) e with p' from the profile's own differences, so the
  // normal is exactly +-e in every direction (lattice differences of the
  // embedding are parallel to e only for axis directions)
  const Point e = direction.normalized();
  const std::vector<Point> dp = central_gradient(profile);
  Vector d(static_cast<Eigen::Index>(dp.size()));
  for (std::size_t i = 0; i < dp.size(); ++i) d[static_cast<Eigen::Index>(i)] = dp[i][0];
  Grid dgrid = profile.grid;
  dgrid.boundary = BoundaryModel::constant(0.0);
  const ScalarField slope(dgrid, std::move(d));
  embed_profile(profile, e, grid);  // reach check
  std::vector<double> gn(grid.node_count());
  std::vector<Point> nu(grid.node_count(), Point::Zero());
  for (std::size_t i = 0; i < gn.size(); ++i) {
    const double d = slope.sample(Point(e.dot(grid.position(i)), 0.0, 0.0));
    gn[i] = std::abs(d);
    if (d != 0.0) nu[i] = d > 0.0 ? e : Point(-e);
  }
  return gradient_pair_sums(grid, gn, nu, spec.s);
}

}  // namespace fracac

namespace fracac {

Point VectorFieldSpec::operator()(const Point& x) const {
  const double r = (x - support.center).norm();
  if (r < inner_radius || r > support.radius) return Point::Zero();
  return components(x);
}

Point flow_point(const VectorFieldSpec& X, const Point& x, double t) {
  if (t == 0.0) return x;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / 0.01)));
  const double dt = t / steps;
  Point y = x;
  for (int k = 0; k < steps; ++k) {
    const Point k1 = X(y);
    const Point k2 = X(y + 0.5 * dt * k1);
    const Point k3 = X(y + 0.5 * dt * k2);
    const Point k4 = X(y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

namespace {

constexpr int kBand = 6;

std::vector<std::array<int, 3>> band_offsets(int n) {
  std::vector<std::array<int, 3>> offs;
  const int lo = -kBand, hi = kBand;
  for (int a = lo; a <= hi; ++a)
    for (int b = (n > 1 ? lo : 0); b <= (n > 1 ? hi : 0); ++b)
      for (int c = (n > 2 ? lo : 0); c <= (n > 2 ? hi : 0); ++c)
        if (a != 0 || b != 0 || c != 0) offs.push_back({a, b, c});
  std::stable_sort(offs.begin(), offs.end(), [](const auto& p, const auto& q) {
    return p[0] * p[0] + p[1] * p[1] + p[2] * p[2] < q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
  });
  return offs;
}

}  // namespace

ScalarField signed_distance(const IndicatorSet& E) {
  const Grid& g = E.grid;
  const ScalarField chi = E.characteristic();
  const auto offs = band_offsets(g.dim);
  const std::size_t count = g.node_count();
  Vector d(static_cast<Eigen::Index>(count));
  parallel_for(count, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const bool in = E.membership[i] != 0;
      const auto idx = g.multi_index(i);
      double dist = (kBand + 1) * g.h;
      for (const auto& o : offs) {
        const std::array<int, 3> j{idx[0] + o[0], idx[1] + o[1], idx[2] + o[2]};
        if ((chi.at_index(j) > 0.5) != in) {
          dist = g.h * std::sqrt(static_cast<double>(o[0] * o[0] + o[1] * o[1] + o[2] * o[2]));
          break;
        }
      }
      d[static_cast<Eigen::Index>(i)] = (in ? 1.0 : -1.0) * (dist - 0.5 * g.h);
    }
  });
  return ScalarField(g, d);
}

namespace {

struct FlowSample {
  Point position;
  double jacobian = 1.0;
  Eigen::Matrix3d gradient = Eigen::Matrix3d::Identity();
};

// RK4 on the flow together with its variational equation dM/dt = DX(y) M.
FlowSample flow_with_jacobian(const VectorFieldSpec& X, const Point& x, double t, int n) {
  if (t == 0.0) return {x, 1.0, Eigen::Matrix3d::Identity()};
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / 0.01)));
  const double dt = t / steps;
  constexpr double fd = 1e-6;
  auto DX = [&](const Point& y) {
    Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
    for (int a = 0; a < n; ++a) {
      const Point e = Point::Unit(a) * fd;
      D.col(a) = (X(y + e) - X(y - e)) / (2.0 * fd);
    }
    return D;
  };
  Point y = x;
  Eigen::Matrix3d M = Eigen::Matrix3d::Identity();
  for (int k = 0; k < steps; ++k) {
    const Point k1 = X(y);
    const Eigen::Matrix3d m1 = DX(y) * M;
    const Point y2 = y + 0.5 * dt * k1;
    const Point k2 = X(y2);
    const Eigen::Matrix3d m2 = DX(y2) * (M + 0.5 * dt * m1);
    const Point y3 = y + 0.5 * dt * k2;
    const Point k3 = X(y3);
    const Eigen::Matrix3d m3 = DX(y3) * (M + 0.5 * dt * m2);
    const Point y4 = y + dt * k3;
    const Point k4 = X(y4);
    const Eigen::Matrix3d m4 = DX(y4) * (M + dt * m3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    M += dt / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
  }
  return {y, M.topLeftCorner(n, n).determinant(), M};
}

bool in_support(const VectorFieldSpec& X, const Point& x) {
  const double r = (x - X.support.center).norm();
  return r >= X.inner_radius && r <= X.support.radius;
}

}  // namespace

IndicatorSet flow_map(const IndicatorSet& E, const VectorFieldSpec& X, double t) {
  const Grid& g = E.grid;
  const ScalarField sdf = signed_distance(E);
  const std::size_t count = g.node_count();
  Mask m(count);
  bool degenerate = false;
  for (std::size_t i = 0; i < count; ++i) {
    const Point x = g.position(i);
    if (t == 0.0 || !in_support(X, x)) {
      m[i] = E.membership[i];
      continue;
    }
    const FlowSample back = flow_with_jacobian(X, x, -t, g.dim);
    if (!(back.jacobian > 0.0)) degenerate = true;
    m[i] = sdf.sample(back.position) > 0.0;
  }
  if (degenerate) throw NumericalError("flow map Jacobian degenerates; reduce |t|");
  return IndicatorSet{g, m};
}

}  // namespace fracac

namespace fracac {

namespace {

IndicatorSet refine(const IndicatorSet& E) {
  const Grid& g = E.grid;
  const Grid fine = make_grid(g.dim, g.box_radius, 0.5 * g.h, g.boundary);
  Mask m(fine.node_count());
  const int N = g.nodes_per_axis;
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto idx = fine.multi_index(i);
    for (int a = 0; a < g.dim; ++a) idx[a] = g.periodic() ? ((idx[a] + 1) / 2) % N : idx[a] / 2;
    m[i] = E.membership[g.linear_index(idx)];
  }
  return IndicatorSet{fine, m};
}

// Perimeter change under the flow, by change of variables on the fixed lattice:
// P(phi(E)) = sum over cell pairs (Q_y in E, Q_z in E^c) of
// int_{Q_y} int_{Q_z} K(phi a - phi b) J(a) J(b), plus exterior tails at the
// moved points. Near pairs use the cell-pair integral under the averaged
// flow gradient, far pairs the point value with its tent-variance correction.
// Only pairs touching moved nodes change.
class PerimeterVariation {
 public:
  static constexpr int kNear = 4;

  PerimeterVariation(const IndicatorSet& E, const BallRegion& region, double s)
      : chi_(E.characteristic()), n_(E.grid.dim), s_(s), law_(power_law(E.grid.dim, s, 1.0)), region_(region), in_(E.membership) {
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("cone perimeter needs s in (0, 1)");
    require_region_inside(E.grid, region);
    const Grid& g = chi_.grid;
    const std::size_t count = g.node_count();
    pos_.resize(count);
    idx_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      pos_[i] = g.position(i);
      idx_[i] = g.multi_index(i);
    }
    // unmoved pair values depend on the offset only
    const int N = g.nodes_per_axis;
    span_ = 2 * N - 1;
    std::size_t table = 1;
    for (int a = 0; a < n_; ++a) table *= static_cast<std::size_t>(span_);
    ref_.assign(table, 0.0);
    parallel_for(table, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        std::size_t rem = k;
        std::array<int, 3> d{0, 0, 0};
        for (int a = 0; a < n_; ++a) {
          d[a] = static_cast<int>(rem % span_) - (N - 1);
          rem /= span_;
        }
        if (d[0] == 0 && d[1] == 0 && d[2] == 0) continue;
        FlowSample fx, fy;
        fy.position = Point::Zero();
        for (int a = 0; a < n_; ++a) fx.position[a] = d[a] * g.h;
        ref_[k] = pair_value(d, fx, fy);
      }
    });
  }

  // P(phi^t E) - P(E).
  double delta(const VectorFieldSpec& X, double t) const {
    const Grid& g = chi_.grid;
    const int n = g.dim;
    const std::size_t count = g.node_count();
    std::vector<std::size_t> moved;
    for (std::size_t i = 0; i < count; ++i)
      if (in_support(X, pos_[i])) moved.push_back(i);
    for (std::size_t i : moved)
      if (!region_.contains(pos_[i])) throw ConfigError("vector field support must lie inside the region");
    std::vector<FlowSample> f(count);
    for (std::size_t i = 0; i < count; ++i) f[i].position = pos_[i];
    std::vector<char> is_moved(count, 0);
    for (std::size_t i : moved) is_moved[i] = 1;
    bool degenerate = false;
    parallel_for(moved.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        f[moved[k]] = flow_with_jacobian(X, pos_[moved[k]], t, n);
        if (!(f[moved[k]].jacobian > 0.0)) degenerate = true;
      }
    });
    if (degenerate) throw NumericalError("flow map Jacobian degenerates; reduce |t|");
    std::vector<double> part(moved.size(), 0.0);
    parallel_for(moved.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        const std::size_t x = moved[k];
        double acc = 0.0;
        for (std::size_t y = 0; y < count; ++y) {
          if (in_[y] == in_[x]) continue;
          // pairs with both ends moved are visited from the E side only
          if (is_moved[y] && !in_[x]) continue;
          acc += pair(x, y, f[x], f[y]) - reference(x, y);
        }
        const ExteriorMoments now = exterior_moments(g, f[x].position, law_);
        const ExteriorMoments was = exterior_moments(g, pos_[x], law_);
        // opposite phase in the exterior: E^c for x in E, E otherwise
        const double t_now = in_[x] ? now.mass - now.first : now.first;
        const double t_was = in_[x] ? was.mass - was.first : was.first;
        part[k] = acc + f[x].jacobian * t_now - t_was;
      }
    });
    double total = 0.0;
    for (double v : part) total += v;
    return total * g.cell_volume();
  }

 private:
  std::array<int, 3> offset(std::size_t x, std::size_t y) const {
    std::array<int, 3> d{0, 0, 0};
    for (int a = 0; a < n_; ++a) d[a] = idx_[x][a] - idx_[y][a];
    return d;
  }

  double reference(std::size_t x, std::size_t y) const {
    const std::array<int, 3> d = offset(x, y);
    std::size_t k = 0;
    for (int a = n_ - 1; a >= 0; --a) k = k * span_ + static_cast<std::size_t>(d[a] + (span_ - 1) / 2);
    return ref_[k];
  }

  double pair(std::size_t x, std::size_t y, const FlowSample& fx, const FlowSample& fy) const {
    return pair_value(offset(x, y), fx, fy);
  }

  // int_{Q_x} int_{Q_y} K(phi a - phi b) J J / h^n for lattice offset d = x - y.
  double pair_value(const std::array<int, 3>& d, const FlowSample& fx, const FlowSample& fy) const {
    const Grid& g = chi_.grid;
    const int n = n_;
    int dinf = 0;
    for (int a = 0; a < n; ++a) dinf = std::max(dinf, std::abs(d[a]));
    const Eigen::Matrix3d A = 0.5 * (fx.gradient + fy.gradient);
    const double jj = fx.jacobian * fy.jacobian;
    if (dinf <= kNear) return jj * std::pow(g.h, -s_) * cell_pair_integral_mapped(n, s_, d, A);
    const Point z = fx.position - fy.position;
    const double m = n + s_;
    const double r2 = z.squaredNorm();
    const double base = std::pow(r2, -0.5 * m);
    const double frob = A.topLeftCorner(n, n).squaredNorm();
    const double lap = base / r2 * (-m * frob + m * (m + 2.0) * (A.transpose() * z).squaredNorm() / r2);
    return jj * g.cell_volume() * (base + g.h * g.h / 12.0 * lap);
  }

  ScalarField chi_;
  int n_;
  double s_;
  RadialLaw law_;
  BallRegion region_;
  Mask in_;
  std::vector<Point> pos_;
  std::vector<std::array<int, 3>> idx_;
  int span_ = 1;
  std::vector<double> ref_;
};

double quotient(const PerimeterVariation& P, const VectorFieldSpec& X, double t) {
  return (P.delta(X, t) + P.delta(X, -t)) / (t * t);
}
}  // namespace

std::vector<std::vector<ConeQuotient>> cone_perimeter_stability(const IndicatorSet& E,
                                                                const std::vector<VectorFieldSpec>& suite,
                                                                const BallRegion& region, double s,
                                                                const std::vector<double>& t_list) {
  if (suite.empty()) return {};
  std::vector<double> ts;
  for (double t : t_list) {
    if (t == 0.0) throw ConfigError("cone quotient needs nonzero t");
    const double a = std::abs(t);
    if (std::find(ts.begin(), ts.end(), a) == ts.end()) ts.push_back(a);
  }
  const PerimeterVariation coarse(E, region, s);
  const PerimeterVariation fine(refine(E), region, s);
  std::vector<std::vector<ConeQuotient>> out;
  for (const VectorFieldSpec& X : suite) {
    std::vector<ConeQuotient> trace;
    for (double t : ts) {
      ConeQuotient c;
      c.t = t;
      c.q_coarse = quotient(coarse, X, t);
      c.q = quotient(fine, X, t);
      c.error_bar = std::abs(c.q - c.q_coarse);
      trace.push_back(c);
    }
    out.push_back(std::move(trace));
  }
  return out;
}

std::vector<ConeQuotient> cone_perimeter_stability(const IndicatorSet& E, const VectorFieldSpec& X,
                                                   const BallRegion& region, double s,
                                                   const std::vector<double>& t_list) {
  return cone_perimeter_stability(E, std::vector<VectorFieldSpec>{X}, region, s, t_list).front();
}

std::vector<VectorFieldSpec> random_bump_suite(int count, unsigned seed) {
  constexpr double inner = 0.05, outer = 1.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<VectorFieldSpec> suite;
  for (int k = 0; k < count; ++k) {
    // coefficients of cos(j theta), sin(j theta) for j = 0..2, vector valued
    std::array<Eigen::Vector2d, 6> coef;
    for (auto& c : coef) c = Eigen::Vector2d(normal(rng), normal(rng));
    VectorFieldSpec X;
    X.support = BallRegion{Point::Zero(), outer};
    X.inner_radius = inner;
    X.components = [coef](const Point& x) {
      const double r = std::hypot(x[0], x[1]);
      if (r <= inner || r >= outer) return Point(Point::Zero());
      const double bump = std::exp(-1.0 / ((r - inner) * (outer - r)) + 1.0 / (0.25 * (outer - inner) * (outer - inner)));
      const double th = std::atan2(x[1], x[0]);
      Eigen::Vector2d v = coef[0];
      for (int j = 1; j <= 2; ++j) v += coef[2 * j - 1] * std::cos(j * th) + coef[2 * j] * std::sin(j * th);
      v *= bump;
      return Point(v.x(), v.y(), 0.0);
    };
    suite.push_back(std::move(X));
  }
  return suite;
}

}  // namespace fracac
