#pragma once

#include <functional>
#include <vector>

#include "fracac/field.hpp"
#include "fracac/kernel.hpp"
#include "fracac/lattice.hpp"
#include "fracac/potential.hpp"

namespace fracac {

/// Q(xi) = 1/2 sum of kernel-weighted squared differences + eps^{-s} h^n sum W''(u) xi^2.
double second_variation(const ScalarField& u, const ScalarField& xi, const KernelSpec& spec, const Potential& W,
                        double epsilon = 1.0);

struct StabilityReport {
  double min_rayleigh = 0.0;
  ScalarField witness;  // unit h^n-norm, zero outside the region
  int iterations = 0;
  BallRegion region;
  bool converged = false;
  double residual = 0.0;  // ||A w - min_rayleigh w|| for the unit witness
};

/// Smallest Rayleigh quotient Q(xi) / (h^n ||xi||^2) over xi supported in the
/// region nodes: restarted Lanczos with full reorthogonalization. The value
/// reported is the Rayleigh quotient of the returned witness.
StabilityReport min_rayleigh(const ScalarField& u, const BallRegion& region, const KernelSpec& spec,
                             const Potential& W, double epsilon = 1.0, int iterations = 120);

/// Radial cutoff: 1 on [0, 2], 0 beyond 3, smooth and nonincreasing.
double cutoff_xi(double r);
/// psi(x) = xi(|(x1, x2)|) xi(|x3|).
double cutoff_psi(const Point& x, int n);

struct GradientTest {
  double I2 = 0.0;
  double I3 = 0.0;
};

/// Pair sums with the bare kernel |x - y|^{-n-s}:
///   I2 = sum |nu(x) - nu(y)|^2 psi(x)^2 |grad u|(x) |grad u|(y) K,
///   I3 = sum |psi(x) - psi(y)|^2 |grad u|(x) |grad u|(y) K,
/// nu = grad u / |grad u| (0 where the gradient vanishes). Requires n >= 2 and
/// a converged solution (residual <= 1e-4), otherwise PreconditionError.
GradientTest gradient_test_inequality(const ScalarField& u, const KernelSpec& spec, const Potential& W,
                                      double epsilon = 1.0);

/// Same sums for the embedding p(direction . x) of a 1D profile onto grid, with
/// the gradient p'(direction . x) direction taken from the profile.
/// Convergence is certified for the profile on the inner half of its own
/// lattice, where it solves the 1D equation.
GradientTest gradient_test_embedded(const ScalarField& profile, const Point& direction, const Grid& grid,
                                    const KernelSpec& spec, const Potential& W, double epsilon = 1.0);

/// Smooth vector field X compactly supported in the annulus
/// inner_radius <= |x| <= support.radius around support.center.
struct VectorFieldSpec {
  std::function<Point(const Point&)> components;
  BallRegion support;
  double inner_radius = 0.0;
  bool time_dependent = false;

  Point operator()(const Point& x) const;
};

/// Position of the flow of X started at x after time t (RK4, steps of at most 0.01).
Point flow_point(const VectorFieldSpec& X, const Point& x, double t);

/// Signed distance sampling of E: positive inside, from the node sets of the
/// two phases (distance to the nearest opposite node minus h/2).
ScalarField signed_distance(const IndicatorSet& E);

/// phi^t_X(E): nodes in the support of X take the sign of the signed
/// distance at their back-traced position, the rest keep their membership.
/// Throws NumericalError when the Jacobian of the flow degenerates.
IndicatorSet flow_map(const IndicatorSet& E, const VectorFieldSpec& X, double t);

struct ConeQuotient {
  double t = 0.0;
  double q = 0.0;          // fine-grid value
  double q_coarse = 0.0;   // value on the given grid
  double error_bar = 0.0;  // |q_fine - q_coarse|
};

/// q(t) = [P(phi^t E) + P(phi^{-t} E) - 2 P(E)] / t^2 on the given grid and
/// on its 2x refinement (E refined by parent cell), for |t| over t_list.
/// P(phi^t E) is evaluated by change of variables on the lattice of E (the
/// pair sums of E with moved nodes and flow Jacobians), which is smooth in t.
/// The support of X must lie inside the region.
std::vector<ConeQuotient> cone_perimeter_stability(const IndicatorSet& E, const VectorFieldSpec& X,
                                                   const BallRegion& region, double s,
                                                   const std::vector<double>& t_list);

/// Same for a suite of fields, sharing the perimeter operators.
std::vector<std::vector<ConeQuotient>> cone_perimeter_stability(const IndicatorSet& E,
                                                                const std::vector<VectorFieldSpec>& suite,
                                                                const BallRegion& region, double s,
                                                                const std::vector<double>& t_list);

/// Random radial x angular bump fields supported in B_1 minus B_{0.05} (2D).
std::vector<VectorFieldSpec> random_bump_suite(int count, unsigned seed);

}  // namespace fracac
