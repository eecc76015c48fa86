#pragma once

#include "fracac/field.hpp"
#include "fracac/kernel.hpp"

namespace fracac {

/// L_K u at every node: weighted second differences plus exterior tails
/// (periodic grids fold the images instead). Classical specs give -Laplacian.
ScalarField apply_LK_quadrature(const ScalarField& u, const KernelSpec& spec);

/// Constant c with c |xi|^s equal to the quadrature symbol of `spec` on the
/// lowest mode (1, 0, 0) of the periodic grid g.
double spectral_calibration(const Grid& g, const KernelSpec& spec);

/// Fourier multiplier c |xi|^s on a periodic grid, c from spectral_calibration.
ScalarField apply_fraclap_spectral(const ScalarField& u, const KernelSpec& spec);
ScalarField apply_fraclap_spectral(const ScalarField& u, double s);

/// Second-order central stencil of -Laplacian; ghost values from the exterior model.
ScalarField apply_laplacian(const ScalarField& u);

struct ConsistencyReport {
  double discrepancy = 0.0;  // sup |spectral - quadrature| / sup |quadrature|
  double tolerance = 0.0;
  bool passed = false;
  double calibrated_constant = 0.0;
  double closed_form_constant = 0.0;
};

ConsistencyReport operator_consistency(const ScalarField& u, double s, double tolerance);
ConsistencyReport operator_consistency(const ScalarField& u, const KernelSpec& spec, double tolerance);

}  // namespace fracac
