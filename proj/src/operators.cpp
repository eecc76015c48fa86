#include "fracac/operators.hpp"

#include <cmath>
#include <complex>

#include "fracac/lattice.hpp"
#include "fracac/numerics.hpp"

namespace fracac {

ScalarField apply_LK_quadrature(const ScalarField& u, const KernelSpec& spec) {
  const LatticeOperator op(u.grid, spec);
  return ScalarField(u.grid, op.apply(u.values));
}

double spectral_calibration(const Grid& g, const KernelSpec& spec) {
  if (!g.periodic()) throw ConfigError("spectral route needs a periodic grid");
  const LatticeOperator op(g, spec);
  const double xi1 = M_PI / g.box_radius;
  return op.symbol({1, 0, 0}) / std::pow(xi1, spec.order());
}

ScalarField apply_fraclap_spectral(const ScalarField& u, const KernelSpec& spec) {
  const Grid& g = u.grid;
  const double c = spectral_calibration(g, spec);
  const int n = g.dim, N = g.nodes_per_axis;
  std::vector<std::complex<double>> buf(g.node_count());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = u.values[static_cast<Eigen::Index>(i)];
  fft_nd(buf, n, N, false);
  const double base = M_PI / g.box_radius;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const auto idx = g.multi_index(i);
    double k2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double k = signed_frequency(idx[a], N);
      k2 += k * k;
    }
    buf[i] *= c * std::pow(base * base * k2, 0.5 * spec.order());
  }
  fft_nd(buf, n, N, true);
  Vector out(static_cast<Eigen::Index>(buf.size()));
  for (std::size_t i = 0; i < buf.size(); ++i) out[static_cast<Eigen::Index>(i)] = buf[i].real();
  return ScalarField(g, std::move(out));
}

ScalarField apply_fraclap_spectral(const ScalarField& u, double s) {
  return apply_fraclap_spectral(u, KernelSpec::fractional(s));
}

ScalarField apply_laplacian(const ScalarField& u) { return apply_LK_quadrature(u, KernelSpec::classical()); }

ConsistencyReport operator_consistency(const ScalarField& u, const KernelSpec& spec, double tolerance) {
  ConsistencyReport r;
  r.tolerance = tolerance;
  r.calibrated_constant = spectral_calibration(u.grid, spec);
  r.closed_form_constant = closed_form_symbol(spec, u.grid.dim);
  const Vector q = apply_LK_quadrature(u, spec).values;
  const Vector p = apply_fraclap_spectral(u, spec).values;
  const double scale = q.cwiseAbs().maxCoeff();
  const double diff = (p - q).cwiseAbs().maxCoeff();
  r.discrepancy = scale > 0.0 ? diff / scale : diff;
  r.passed = r.discrepancy <= tolerance;
  return r;
}

ConsistencyReport operator_consistency(const ScalarField& u, double s, double tolerance) {
  return operator_consistency(u, KernelSpec::fractional(s), tolerance);
}

}  // namespace fracac
