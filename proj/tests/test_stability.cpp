#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"

#include "fracac/solver.hpp"
#include "fracac/stability.hpp"

using namespace fracac;

TEST_CASE("second variation") {
  const KernelSpec spec = KernelSpec::fractional(0.5, Normalization::unit_symbol);
  const Potential W = Potential::quartic();
  const Grid g = make_grid(1, 4.0, 0.125, BoundaryModel::constant(1.0));
  const ScalarField one = ScalarField::constant(g, 1.0);
  CHECK(second_variation(one, ScalarField::constant(g, 0.0), spec, W) == 0.0);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 5; ++k) {
    const ScalarField xi = ScalarField::from_function(g, [&](const Point&) { return normal(rng); });
    const ScalarField two(g, 2.0 * xi.values);
    const double q = second_variation(one, xi, spec, W);
    CHECK(second_variation(one, two, spec, W) == doctest::Approx(4.0 * q).epsilon(1e-12));
    CHECK(q >= 2.0 * g.cell_volume() * xi.values.squaredNorm() - 1e-12);
  }
}

TEST_CASE("minimal Rayleigh quotient at the wells") {
  const KernelSpec spec = KernelSpec::fractional(0.5, Normalization::unit_symbol);
  const Grid g = make_grid(1, 4.0, 0.125, BoundaryModel::constant(1.0));
  const StabilityReport r = min_rayleigh(ScalarField::constant(g, 1.0), BallRegion{Point::Zero(), 2.0}, spec,
                                         Potential::quartic());
  CHECK(r.min_rayleigh >= 2.0 - 1e-6);
}

TEST_CASE("minimal Rayleigh quotient against a dense eigensolve") {
  // Q(xi) / (h ||xi||^2) on the region nodes is a quadratic form; assemble it
  // column by column with the polarization identity and diagonalize.
  const KernelSpec spec = KernelSpec::fractional(0.5, Normalization::unit_symbol);
  const Potential W = Potential::quartic();
  const Grid g = make_grid(1, 4.0, 0.125, BoundaryModel::constant(0.0));
  const ScalarField zero = ScalarField::constant(g, 0.0);
  const BallRegion region{Point::Zero(), 2.0};
  const Mask m = region_mask(g, region);
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) nodes.push_back(i);
  const Eigen::Index k = static_cast<Eigen::Index>(nodes.size());
  auto unit = [&](std::size_t i) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(g.node_count()));
    v[static_cast<Eigen::Index>(i)] = 1.0;
    return v;
  };
  Eigen::MatrixXd A(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b <= a; ++b) {
      const Vector ea = unit(nodes[a]), eb = unit(nodes[b]);
      const double qp = second_variation(zero, ScalarField(g, ea + eb), spec, W);
      const double qm = second_variation(zero, ScalarField(g, ea - eb), spec, W);
      A(a, b) = A(b, a) = 0.25 * (qp - qm) / g.cell_volume();
    }
  const double dense = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues().minCoeff();
  const StabilityReport r = min_rayleigh(zero, region, spec, W);
  CHECK(r.converged);
  CHECK(r.min_rayleigh == doctest::Approx(dense).epsilon(1e-8));
  CHECK(r.min_rayleigh < 0.0);
}

TEST_CASE("layer stability and translation mode") {
  const KernelSpec spec = KernelSpec::fractional(0.5, Normalization::unit_symbol);
  const SolveResult layer = solve_layer_1d(0.5, 20.0, 0.05, 1e-10);
  const BallRegion region{Point::Zero(), 10.0};
  const StabilityReport r = min_rayleigh(layer.field, region, spec, Potential::quartic());
  CHECK(std::abs(r.min_rayleigh) <= 1e-2);
  const auto grad = central_gradient(layer.field);
  const Mask m = region_mask(layer.field.grid, region);
  Vector d = Vector::Zero(layer.field.values.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (m[static_cast<std::size_t>(i)]) d[i] = grad[static_cast<std::size_t>(i)][0];
  CHECK(std::abs(d.normalized().dot(r.witness.values.normalized())) >= 0.99);
}

TEST_CASE("gradient test on trivial and embedded fields") {
  const KernelSpec spec = KernelSpec::fractional(0.5, Normalization::unit_symbol);
  const Potential W = Potential::quartic();
  const Grid g = make_grid(2, 4.0, 0.125, BoundaryModel::constant(1.0));
  const GradientTest flat = gradient_test_inequality(ScalarField::constant(g, 1.0), spec, W);
  CHECK(flat.I2 == 0.0);
  CHECK(flat.I3 == 0.0);
  const ScalarField layer = solve_layer_1d(0.5, 20.0, 0.125, 1e-10).field;
  const GradientTest e = gradient_test_embedded(layer, Point::UnitX(), g, spec, W);
  CHECK(e.I2 == 0.0);
  CHECK(e.I3 > 0.0);
  const GradientTest tilted = gradient_test_embedded(layer, Point(1.0, 2.0, 0.0), g, spec, W);
  CHECK(tilted.I2 == 0.0);
}

TEST_CASE("cutoffs") {
  CHECK(cutoff_xi(0.0) == 1.0);
  CHECK(cutoff_xi(2.0) == 1.0);
  CHECK(cutoff_xi(3.0) == 0.0);
  double last = 1.0;
  for (double r = 2.0; r <= 3.0; r += 0.01) {
    CHECK(cutoff_xi(r) <= last + 1e-15);
    last = cutoff_xi(r);
  }
}

TEST_CASE("flow maps") {
  const Grid g = make_grid(2, 1.25, 0.0625, BoundaryModel::sided(1.0, -1.0));
  Mask m(g.node_count());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.position(i)[0] > 0.0;
  const IndicatorSet E{g, m};
  VectorFieldSpec zero;
  zero.components = [](const Point&) { return Point::Zero(); };
  zero.support = BallRegion{Point::Zero(), 1.0};
  CHECK(flow_map(E, zero, 0.1).membership == m);

  // constant e1 field near the origin: the half-plane moves by t there
  VectorFieldSpec push;
  push.components = [](const Point&) { return Point::UnitX(); };
  push.support = BallRegion{Point::Zero(), 1.0};
  const double t = 0.25;
  const IndicatorSet moved = flow_map(E, push, t);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Point x = g.position(i);
    if (x.norm() < 0.5 && std::abs(x[0] - t) > g.h) CHECK(moved.membership[i] == (x[0] > t));
  }
}

TEST_CASE("symmetric difference grows like t times the boundary flux") {
  const Grid g = make_grid(2, 1.25, 1.0 / 64.0, BoundaryModel::sided(1.0, -1.0));
  Mask m(g.node_count());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.position(i)[0] > 0.0;
  const IndicatorSet E{g, m};
  VectorFieldSpec X;
  X.support = BallRegion{Point::Zero(), 1.0};
  X.components = [](const Point& x) {
    const double r2 = x.squaredNorm();
    return r2 < 1.0 ? Point(std::pow(1.0 - r2, 2), 0.0, 0.0) : Point::Zero();
  };
  // int_{-1}^{1} (1 - y^2)^2 dy = 16 / 15
  const double flux = 16.0 / 15.0;
  for (double t : {0.1, 0.05}) {
    const IndicatorSet F = flow_map(E, X, t);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < m.size(); ++i) diff += F.membership[i] != m[i];
    CHECK(diff * g.cell_volume() / t == doctest::Approx(flux).epsilon(0.05));
  }
}
