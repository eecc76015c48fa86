#pragma once

#include <string>

#include "fracac/field.hpp"
#include "fracac/kernel.hpp"
#include "fracac/potential.hpp"

namespace fracac {

struct EnergyBreakdown {
  double sobolev = 0.0;
  double potential = 0.0;
  BallRegion region;
  double epsilon = 1.0;
  /// Sampling error of the Sobolev term; the lattice sums are exact, so 0.
  double stderr_sobolev = 0.0;
  double total() const { return sobolev + potential; }
  /// {"region": ..., "epsilon": ..., "sobolev": ..., "potential": ..., "stderr": ...}
  std::string to_json() const;
};

/// Localized Sobolev energy: 1/4 of the kernel-weighted squared differences
/// over pairs with at least one point in the region, exterior pairs included.
double energy_sobolev(const ScalarField& u, const BallRegion& region, const KernelSpec& spec);

/// eps^{-s} h^n sum_{region} W(u).
double energy_potential(const ScalarField& u, const BallRegion& region, const Potential& W, double epsilon,
                        double s);

EnergyBreakdown energy(const ScalarField& u, const BallRegion& region, const KernelSpec& spec, const Potential& W,
                       double epsilon = 1.0);

/// P_s(E, Omega) with the bare kernel |z|^{-n-s} and cell-average weights.
/// The exterior of E comes from the grid's exterior model (positive values
/// are inside E).
double fractional_perimeter(const IndicatorSet& E, const BallRegion& region, double s);

struct PerimeterIdentity {
  double perimeter = 0.0;
  double twice_energy = 0.0;  // 2 E^Sob(chi_E) with the same weights
  double residual = 0.0;      // relative
};

PerimeterIdentity perimeter_energy_identity(const IndicatorSet& E, const BallRegion& region, double s);

/// phi_4(r): 1 on [0, 2], (4 - r)/2 on [2, 4], 0 beyond.
double cutoff_phi4(double r);

struct VariationMap {
  Point direction = Point::UnitX();
  double t = 0.0;

  /// Psi_t(y) = y + t phi_4(|y|) v.
  Point forward(const Point& y) const;
  /// Psi_t^{-1}(x) by fixed-point iteration (a contraction for |t| < 1).
  Point inverse(const Point& x) const;
};

/// u_t(x) = u(Psi_t^{-1}(x)) with multilinear sampling. Requires B_4 inside
/// the box and |t| < 1.
ScalarField domain_variation(const ScalarField& u, const VariationMap& map);

struct TranslationComparison {
  double second_difference = 0.0;
  double sobolev_part = 0.0;
  double potential_part = 0.0;
  double bound_ratio = 0.0;
  bool ratio_defined = false;
};

/// E(u_t) + E(u_{-t}) - 2 E(u) on B_4 and its ratio to t^2 E^Sob_{B_4}(u).
TranslationComparison translation_comparison(const ScalarField& u, const VariationMap& map, const KernelSpec& spec,
                                             const Potential& W, double epsilon = 1.0);

/// |LHS - RHS| of the pointwise max/min identity for the values
/// u(x), u_t(x), u(y), u_t(y).
double maxmin_identity_check(double ux, double utx, double uy, double uty);

struct GradientBound {
  double gradient_l1 = 0.0;  // int_{B_1} |grad u|
  double eta = 0.0;          // measured from directional difference quotients
  double bound = 0.0;        // 2n (|B_1^{(n-1)}| + sqrt(eta))
  bool holds = false;
};

/// eta = max over sampled directions v of the smallest (over shifts t in
/// {h, 2h, 4h, 8h}) of ||(u - u(. - t v))_+||_{L1(B_1)} ||(.)_-||_{L1(B_1)} / t^2.
GradientBound gradient_bound_check(const ScalarField& u, int directions = 16);

}  // namespace fracac
