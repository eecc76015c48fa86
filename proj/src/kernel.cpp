#include "fracac/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fracac/errors.hpp"

namespace fracac {

KernelSpec KernelSpec::fractional(double s, Normalization norm) {
  if (!(s > 0.0 && s < 2.0)) throw ConfigError("fractional order s must lie in (0, 2)");
  KernelSpec k;
  k.kind = KernelKind::fractional;
  k.s = s;
  k.normalization = norm;
  return k;
}

KernelSpec KernelSpec::general(double s, double lambda, double Lambda, std::function<double(double)> profile,
                               Normalization norm) {
  if (!(s > 0.0 && s < 2.0)) throw ConfigError("kernel order s must lie in (0, 2)");
  if (!(lambda > 0.0 && lambda <= Lambda)) throw ConfigError("ellipticity requires 0 < lambda <= Lambda");
  if (!profile) throw ConfigError("general kernel needs a radial profile");
  KernelSpec k;
  k.kind = KernelKind::general_L2;
  k.s = s;
  k.lambda = lambda;
  k.Lambda = Lambda;
  k.profile = std::move(profile);
  k.normalization = norm;
  return k;
}

KernelSpec KernelSpec::classical() {
  KernelSpec k;
  k.kind = KernelKind::classical;
  k.s = 2.0;
  return k;
}

KernelSpec KernelSpec::perimeter(double s) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("fractional perimeter needs s in (0, 1)");
  KernelSpec k = fractional(s, Normalization::bare);
  k.rule = WeightRule::cell_average;
  return k;
}

double unit_symbol_constant(int n, double s) {
  return std::pow(2.0, s) * std::tgamma(0.5 * (n + s)) / (std::pow(M_PI, 0.5 * n) * std::abs(std::tgamma(-0.5 * s)));
}

double KernelSpec::prefactor(int n) const {
  switch (normalization) {
    case Normalization::kernel_class:
      return 2.0 - s;
    case Normalization::unit_symbol:
      return unit_symbol_constant(n, s);
    case Normalization::bare:
      return 1.0;
  }
  return 1.0;
}

double closed_form_symbol(const KernelSpec& spec, int n) {
  if (spec.kind == KernelKind::classical) return 1.0;
  return spec.prefactor(n) / unit_symbol_constant(n, spec.s);
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case KernelKind::fractional:
      os << "fractional(s=" << s << ")";
      break;
    case KernelKind::general_L2:
      os << "general_L2(s=" << s << ", lambda=" << lambda << ", Lambda=" << Lambda << ")";
      break;
    case KernelKind::classical:
      return "classical";
  }
  switch (normalization) {
    case Normalization::kernel_class:
      os << "[kernel_class]";
      break;
    case Normalization::unit_symbol:
      os << "[unit_symbol]";
      break;
    case Normalization::bare:
      os << "[bare]";
      break;
  }
  if (rule == WeightRule::cell_average) os << "[cell_average]";
  return os.str();
}

double kernel_value(const KernelSpec& spec, const Eigen::VectorXd& z) {
  if (spec.kind == KernelKind::classical) throw ConfigError("classical kind has no integral kernel");
  const double r = z.norm();
  if (r == 0.0) throw SingularityError("kernel evaluated at z = 0");
  const int n = static_cast<int>(z.size());
  return spec.prefactor(n) * spec.rho(r) * std::pow(r, -n - spec.s);
}

KernelAudit audit_kernel(const KernelSpec& spec, int n, int radii, unsigned seed, double derivative_limit) {
  KernelAudit audit;
  if (spec.kind == KernelKind::classical) return audit;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double base = spec.prefactor(n);
  audit.worst_lower_ratio = std::numeric_limits<double>::infinity();
  audit.worst_upper_ratio = 0.0;
  for (int i = 0; i < radii; ++i) {
    const double r = std::pow(10.0, -3.0 + 6.0 * i / std::max(1, radii - 1));
    Eigen::VectorXd e(n);
    for (int a = 0; a < n; ++a) e[a] = normal(rng);
    e.normalize();
    const Eigen::VectorXd z = r * e;
    const double k = kernel_value(spec, z);
    const double km = kernel_value(spec, -z);
    if (std::abs(k - km) > 1e-14 * std::abs(k)) audit.symmetric = false;
    const double frac = base * std::pow(r, -n - spec.s);
    const double ratio = k / frac;
    audit.worst_lower_ratio = std::min(audit.worst_lower_ratio, ratio);
    audit.worst_upper_ratio = std::max(audit.worst_upper_ratio, ratio);
    if (ratio < spec.lambda * (1.0 - 1e-12)) audit.lower_bound = false;
    if (ratio > spec.Lambda * (1.0 + 1e-12)) audit.upper_bound = false;
    // directional derivatives along a random unit direction
    Eigen::VectorXd d(n);
    for (int a = 0; a < n; ++a) d[a] = normal(rng);
    d.normalize();
    const double step = 1e-4 * r;
    const double kp = kernel_value(spec, z + step * d);
    const double kn = kernel_value(spec, z - step * d);
    const double first = (kp - kn) / (2.0 * step);
    const double second = (kp - 2.0 * k + kn) / (step * step);
    const double c = std::max(r * std::abs(first), r * r * std::abs(second)) / frac;
    audit.derivative_constant = std::max(audit.derivative_constant, c);
  }
  if (audit.derivative_constant > derivative_limit) audit.derivative_bound = false;
  return audit;
}

}  // namespace fracac
