#pragma once

#include <array>
#include <string>
#include <vector>

#include "fracac/field.hpp"
#include "fracac/potential.hpp"

namespace fracac {

/// d_s = 2^{s-1} Gamma(s/2) / Gamma(1 - s/2).
double extension_constant(double s);

/// psi(t) = 2^{1-s/2} / Gamma(s/2) t^{s/2} K_{s/2}(t): the extension of a
/// Fourier mode of frequency |xi| is psi(|xi| y) times the mode.
double extension_multiplier(double s, double t);

enum class ExtensionBackend { convolution, five_point };

/// U(x, y) on the base lattice times graded heights. values[j] holds the level
/// y_nodes[j]; the trace u itself is kept separately as the y = 0 level.
struct ExtensionField {
  Grid base_grid;
  ScalarField trace;
  std::vector<double> y_nodes;
  std::vector<Vector> values;
  double s = 0.5;
  double d_s = 1.0;

  double weight_exponent() const { return 1.0 - s; }
  std::size_t levels() const { return y_nodes.size(); }
  /// sup |U(., y) - u| at the two smallest levels.
  std::array<double, 2> trace_gap() const;
  /// sup |U(., 0) - u| with U(., 0) extrapolated from the two smallest levels
  /// through U = u + a y^s.
  double extrapolated_trace_gap() const;
};

/// Geometric heights y_0 = h/4, ratio 1.15, up to y_max (the last level is y_max).
std::vector<double> graded_levels(double h, double y_max, double ratio = 1.15);

/// Extension of u by the Poisson kernel of y^{1-s}: level by level, with
/// cell-integrated kernel weights normalized so constants are reproduced
/// exactly (convolution), or by a weighted 5-point solve per Fourier mode
/// (five_point, periodic grids). levels = 0 selects the default grading.
/// Throws NumericalError when the trace extrapolated from the two smallest
/// levels misses u by more than 1% of its oscillation.
ExtensionField extend(const ScalarField& u, double s, double y_max, int levels = 0,
                      ExtensionBackend backend = ExtensionBackend::convolution);

/// Same with explicit heights.
ExtensionField extend_on_levels(const ScalarField& u, double s, std::vector<double> y_nodes,
                                ExtensionBackend backend = ExtensionBackend::convolution);

struct NeumannCheck {
  ScalarField residual;  // |d_s lim y^{1-s} d_y U - eps^{-s} W'(u)| / max|W'|
  double sup_inner = 0.0;  // sup over the inner half of the box
};

/// Neumann trace from g(y) = s (U(., y) - u) / y^s, which tends to
/// lim y^{1-s} d_y U; two-level Richardson at rate 2 on the smallest levels.
NeumannCheck neumann_trace_check(const ExtensionField& U, const Potential& W, double epsilon = 1.0);

/// Parts of the extension energy on the half ball of radius R around the origin.
struct ExtensionEnergy {
  double gradient = 0.0;   // d_s / 2 int y^{1-s} |grad U|^2
  double potential = 0.0;  // int_{B_R} W(u)
  double total() const { return gradient + potential; }
};

/// Weighted quadrature on the node cells times the level intervals clipped to
/// the half ball; the strip below the first level uses U = u + c y^s.
/// stride > 1 uses every stride-th level (coarse companion for error bars).
ExtensionEnergy extension_energy(const ExtensionField& U, double R, const Potential& W, int stride = 1);

struct MonotonicityViolation {
  double R_from = 0.0;
  double R_to = 0.0;
  double drop = 0.0;
};

struct MonotonicityTrace {
  std::vector<double> radii;
  std::vector<double> phi_values;
  std::vector<double> error_bars;
  std::vector<MonotonicityViolation> violations;
  /// Set by the caller when the boundary field is not a converged solution.
  bool hypothesis_violated = false;

  /// R,phi,error_bar rows with a header line.
  std::string to_csv() const;
  /// (max - min) / mean of phi.
  double relative_spread() const;
};

/// Phi(R) = R^{s-n} E_R(U); error bars from the every-other-level quadrature.
/// A violation is an adjacent decrease larger than the sum of the two bars.
MonotonicityTrace monotonicity_trace(const ExtensionField& U, const std::vector<double>& radii,
                                     const Potential& W);

}  // namespace fracac
