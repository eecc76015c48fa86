#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace fracac {

enum class KernelKind { fractional, general_L2, classical };

/// Multiplicative constant in front of |z|^{-n-s}.
///
/// kernel_class: (2 - s), the normalization of the kernel class.
/// unit_symbol:  c(n,s), chosen so the operator has Fourier symbol |xi|^s.
/// bare:         1, the kernel of the fractional perimeter.
enum class Normalization { kernel_class, unit_symbol, bare };

/// How continuum pair interactions become lattice weights.
///
/// corrected_point: point values K(d h) plus a zeta-function correction on the
/// nearest-neighbour shell that removes the leading lattice-sum error.
/// cell_average: exact cell-to-cell integrals of K (s < 1 only), which makes
/// pair sums of piecewise-constant fields exact.
enum class WeightRule { corrected_point, cell_average };

struct KernelSpec {
  KernelKind kind = KernelKind::fractional;
  double s = 0.5;
  double lambda = 1.0;
  double Lambda = 1.0;
  /// Radial profile rho with K(z) = prefactor * rho(|z|) * |z|^{-n-s}; empty means 1.
  std::function<double(double)> profile;
  Normalization normalization = Normalization::kernel_class;
  WeightRule rule = WeightRule::corrected_point;

  static KernelSpec fractional(double s, Normalization norm = Normalization::kernel_class);
  static KernelSpec general(double s, double lambda, double Lambda, std::function<double(double)> profile,
                            Normalization norm = Normalization::kernel_class);
  static KernelSpec classical();
  /// Bare |z|^{-n-s} kernel with cell-average weights (fractional perimeter).
  static KernelSpec perimeter(double s);

  double prefactor(int n) const;
  double rho(double r) const { return profile ? profile(r) : 1.0; }
  bool pure_power() const { return !profile; }
  /// Order of the operator (2 for classical).
  double order() const { return kind == KernelKind::classical ? 2.0 : s; }
  std::string describe() const;
};

/// c(n,s) = 2^s Gamma((n+s)/2) / (pi^{n/2} |Gamma(-s/2)|).
double unit_symbol_constant(int n, double s);

/// Closed-form symbol constant: the operator of `spec` (pure power profile)
/// acts on exp(i xi.x) with eigenvalue closed_form_symbol * |xi|^s.
double closed_form_symbol(const KernelSpec& spec, int n);

/// K(z) for the fractional and general kinds; n = z.size().
double kernel_value(const KernelSpec& spec, const Eigen::VectorXd& z);

struct KernelAudit {
  bool symmetric = true;
  bool lower_bound = true;
  bool upper_bound = true;
  bool derivative_bound = true;
  double worst_lower_ratio = 1.0;  // min K / ((2-s) lambda |z|^{-n-s}) over samples
  double worst_upper_ratio = 1.0;  // max K / ((2-s) Lambda |z|^{-n-s})
  double derivative_constant = 0.0;
  bool passed() const { return symmetric && lower_bound && upper_bound && derivative_bound; }
};

/// Sampled check of the kernel-class bounds on log-spaced radii and random
/// directions: ellipticity, evenness, and |z||d_e K| + |z|^2|d_ee K| bounded by
/// a multiple of |z|^{-n-s} (finite differences).
KernelAudit audit_kernel(const KernelSpec& spec, int n, int radii = 40, unsigned seed = 7,
                         double derivative_limit = 50.0);

}  // namespace fracac
