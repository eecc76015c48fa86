#include "fracac/solver.hpp"

#include <algorithm>
#include <cmath>

#include "fracac/errors.hpp"

namespace fracac {

namespace {

constexpr int kMaxIncreases = 10;

Vector odd_part(const Vector& v) { return 0.5 * (v - v.reverse()); }

double masked_sup(const Vector& v, const Mask& mask) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (mask.empty() || mask[static_cast<std::size_t>(i)]) m = std::max(m, std::abs(v[i]));
  return m;
}

Vector map_values(const Vector& u, const std::function<double(double)>& f) {
  Vector out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = f(u[i]);
  return out;
}

bool in_range(const Vector& u) { return u.cwiseAbs().maxCoeff() <= 1.0 + 1e-12; }

struct NewtonState {
  const LatticeOperator& op;
  const Potential& W;
  double weight;  // eps^{-s}
  bool odd;
};

// Preconditioned CG on J v = L0 v + weight W''(u) v. Stops early on negative
// curvature and returns the last iterate.
Vector newton_direction(const NewtonState& st, const Vector& u, const Vector& rhs, double shift) {
  const Vector curv = st.weight * map_values(u, st.W.ddW);
  auto J = [&](const Vector& v) {
    Vector out = st.op.apply_homogeneous(v) + curv.cwiseProduct(v);
    return st.odd ? odd_part(out) : out;
  };
  auto prec = [&](const Vector& r) {
    Vector z = st.op.solve_shifted(r, shift);
    return st.odd ? odd_part(z) : z;
  };
  Vector x = Vector::Zero(rhs.size());
  Vector r = rhs;
  Vector z = prec(r);
  Vector p = z;
  double rz = r.dot(z);
  const double target = 1e-10 * rhs.norm();
  for (int it = 0; it < 400 && r.norm() > target; ++it) {
    const Vector Jp = J(p);
    const double pJp = p.dot(Jp);
    if (!(pJp > 0.0)) break;
    const double alpha = rz / pJp;
    x += alpha * p;
    r -= alpha * Jp;
    z = prec(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return x.norm() > 0.0 ? x : rhs;
}

}  // namespace

double total_energy(const LatticeOperator& op, const Vector& u, const Potential& W, double epsilon) {
  const Mask all(static_cast<std::size_t>(u.size()), 1);
  double pot = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) pot += W.W(u[i]);
  return op.sobolev_energy(u, all) + std::pow(epsilon, -op.spec().order()) * op.grid().cell_volume() * pot;
}

Vector euler_lagrange(const LatticeOperator& op, const Vector& u, const Potential& W, double epsilon) {
  return op.apply(u) + std::pow(epsilon, -op.spec().order()) * map_values(u, W.dW);
}

SolveResult gradient_flow(const SolveConfig& config, const KernelSpec& spec, const Potential& W) {
  const ScalarField& seed = config.seed_field;
  if (seed.values.size() == 0) throw ConfigError("solver needs a seed field");
  if (seed.values.cwiseAbs().maxCoeff() > 1.0) throw ConfigError("seed values must lie in [-1, 1]");
  if (!(config.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  const Grid& g = seed.grid;
  const LatticeOperator op(g, spec);
  const double weight = std::pow(config.epsilon, -spec.order());
  const Mask certify = config.certify_region ? region_mask(g, *config.certify_region) : Mask{};

  double dt = config.step;
  if (config.scheme == Scheme::explicit_flow) {
    const double stiffness = op.diagonal().maxCoeff() + weight * W.curvature_bound;
    if (dt == 0.0) dt = 0.9 / stiffness;
    if (dt * stiffness > 1.0) throw ConfigError("explicit step exceeds the stiffness bound");
  } else if (dt == 0.0) {
    dt = 0.4 / (weight * W.curvature_bound);
  }

  SolveResult res;
  Vector u = config.odd_symmetry ? odd_part(seed.values) : seed.values;
  double E = total_energy(op, u, W, config.epsilon);
  res.energy_trace.push_back(E);
  Vector R = euler_lagrange(op, u, W, config.epsilon);
  if (config.odd_symmetry) R = odd_part(R);
  res.residual_sup = masked_sup(R, certify);
  int increases = 0;
  const bool newton = config.scheme == Scheme::newton;

  while (res.residual_sup > config.residual_tol && res.iterations < config.max_iterations) {
    ++res.iterations;
    Vector next;
    double E_next = 0.0;
    if (newton && res.residual_sup < config.newton_switch) {
      const NewtonState st{op, W, weight, config.odd_symmetry};
      const Vector dir = newton_direction(st, u, -R, weight * std::max(W.ddW(1.0), W.ddW(-1.0)));
      const double r0 = R.norm();
      double alpha = 1.0;
      for (int k = 0; k < 30; ++k, alpha *= 0.5) {
        next = u + alpha * dir;
        Vector Rn = euler_lagrange(op, next, W, config.epsilon);
        if (config.odd_symmetry) Rn = odd_part(Rn);
        if (Rn.norm() < r0) break;
      }
      E_next = total_energy(op, next, W, config.epsilon);
    } else {
      double local = dt;
      for (int k = 0; k < 30; ++k, local *= 0.5) {
        const Vector update = config.scheme == Scheme::explicit_flow ? Vector(local * R)
                                                                     : op.solve_shifted(R, 1.0 / local);
        next = u - (config.odd_symmetry ? odd_part(update) : update);
        E_next = total_energy(op, next, W, config.epsilon);
        if (config.scheme == Scheme::explicit_flow || E_next <= E + 1e-12 * std::abs(E)) break;
      }
    }
    increases = E_next > E + 1e-12 * std::abs(E) ? increases + 1 : 0;
    u = std::move(next);
    E = E_next;
    res.energy_trace.push_back(E);
    if (!in_range(u)) res.range_preserved = false;
    if (increases >= kMaxIncreases) throw InstabilityError("energy increased for 10 consecutive steps", res.energy_trace);
    R = euler_lagrange(op, u, W, config.epsilon);
    if (config.odd_symmetry) R = odd_part(R);
    res.residual_sup = masked_sup(R, certify);
  }
  res.converged = res.residual_sup <= config.residual_tol;
  res.field = ScalarField(g, std::move(u));
  if (res.range_preserved) res.field.range_hint = std::make_pair(-1.0, 1.0);
  return res;
}

SolveResult solve_layer_1d(double s, double box_radius, double h, double tol) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("layer solve needs s in (0, 1)");
  if (box_radius < 20.0) throw ConfigError("layer solve needs box_radius >= 20 for tail room");
  const Grid g = make_grid(1, box_radius, h, BoundaryModel::sided(1.0, -1.0));
  SolveConfig cfg;
  cfg.scheme = Scheme::newton;
  cfg.residual_tol = tol;
  cfg.odd_symmetry = true;
  cfg.certify_region = BallRegion{Point::Zero(), 0.5 * box_radius};
  cfg.seed_field = ScalarField::from_function(g, [](const Point& x) { return std::tanh(x[0]); });
  SolveResult r = gradient_flow(cfg, KernelSpec::fractional(s, Normalization::unit_symbol), Potential::quartic());
  if (!r.converged) throw NumericalError("layer solve did not reach the residual tolerance");
  return r;
}

double el_consistency(const ScalarField& u, const ScalarField& xi, const KernelSpec& spec, const Potential& W,
                      double epsilon, double tau) {
  if (!u.grid.same_lattice(xi.grid)) throw GridMismatch("el_consistency fields on different grids");
  const LatticeOperator op(u.grid, spec);
  const double ep = total_energy(op, u.values + tau * xi.values, W, epsilon);
  const double em = total_energy(op, u.values - tau * xi.values, W, epsilon);
  const double fd = (ep - em) / (2.0 * tau);
  const double exact = u.grid.cell_volume() * euler_lagrange(op, u.values, W, epsilon).dot(xi.values);
  const double scale = std::max(std::abs(fd), std::abs(exact));
  return scale > 0.0 ? std::abs(fd - exact) / scale : 0.0;
}

}  // namespace fracac
