#include <cmath>
#include <random>

#include "doctest.h"

#include "fracac/lattice.hpp"
#include "fracac/scaling.hpp"
#include "fracac/solver.hpp"

using namespace fracac;

TEST_CASE("wells are fixed points") {
  const Grid g = make_grid(1, 4.0, 0.125, BoundaryModel::constant(1.0));
  SolveConfig c;
  c.seed_field = ScalarField::constant(g, 1.0);
  const SolveResult r = gradient_flow(c, KernelSpec::fractional(0.5), Potential::quartic());
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.residual_sup < 1e-12);
}

TEST_CASE("flow from the middle well lowers the energy") {
  const Grid g = make_grid(1, 8.0, 0.125, BoundaryModel::constant(0.0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1e-3, 1e-3);
  SolveConfig c;
  c.seed_field = ScalarField::from_function(g, [&](const Point&) { return U(rng); });
  c.scheme = Scheme::semi_implicit_spectral;
  c.max_iterations = 300;
  c.residual_tol = 1e-12;
  const SolveResult r = gradient_flow(c, KernelSpec::fractional(0.5), Potential::quartic());
  REQUIRE(r.energy_trace.size() > 2);
  for (std::size_t k = 1; k < r.energy_trace.size(); ++k) CHECK(r.energy_trace[k] <= r.energy_trace[k - 1] + 1e-12);
  CHECK(r.energy_trace.back() < r.energy_trace.front());
  CHECK(r.range_preserved);
}

TEST_CASE("layer profile") {
  for (double s : {0.3, 0.5}) {
    const SolveResult r = solve_layer_1d(s, 40.0, 0.05, 1e-10);
    CHECK(r.converged);
    CHECK(r.residual_sup <= 1e-8);
    const Eigen::Index N = r.field.values.size();
    // phi(0) = 0: the two central nodes are mirror images
    CHECK(r.field.values[N / 2] == doctest::Approx(-r.field.values[N / 2 - 1]).epsilon(1e-12));
    for (Eigen::Index i = 1; i < N; ++i) CHECK(r.field.values[i] > r.field.values[i - 1]);
    const DecayFit d = layer_decay(r.field);
    CHECK_FALSE(d.inconclusive);
    CHECK(std::abs(d.fit.slope + s) <= 0.1);
  }
}

TEST_CASE("layer is a fixed point without enforced symmetry") {
  const SolveResult odd = solve_layer_1d(0.5, 20.0, 0.125, 1e-10);
  SolveConfig c;
  c.seed_field = odd.field;
  c.scheme = Scheme::newton;
  c.residual_tol = 1e-9;
  const SolveResult r = gradient_flow(c, KernelSpec::fractional(0.5, Normalization::unit_symbol), Potential::quartic());
  CHECK(r.converged);
  CHECK((r.field.values - odd.field.values).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("Euler-Lagrange consistency") {
  const KernelSpec spec = KernelSpec::fractional(0.5, Normalization::unit_symbol);
  const Potential W = Potential::quartic();
  const Grid g = make_grid(1, 4.0, 0.125, BoundaryModel::sided(1.0, -1.0));
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const ScalarField u = ScalarField::from_function(g, [&](const Point&) { return 0.9 * U(rng); });
  CHECK(el_consistency(u, ScalarField::constant(g, 0.0), spec, W) == 0.0);
  for (int k = 0; k < 5; ++k) {
    const ScalarField xi = ScalarField::from_function(g, [&](const Point&) { return U(rng); });
    CHECK(el_consistency(u, xi, spec, W) <= 1e-6);
  }
  // away from a critical point, so both sides are of order one
  const SolveResult layer = solve_layer_1d(0.5, 20.0, 0.125, 1e-10);
  const ScalarField bent(layer.field.grid, 0.8 * layer.field.values);
  const ScalarField xi = ScalarField::from_function(layer.field.grid, [&](const Point&) { return U(rng); });
  CHECK(el_consistency(bent, xi, spec, W) <= 1e-6);
}

TEST_CASE("residual of the layer through the quadrature operator") {
  const SolveResult r = solve_layer_1d(0.5, 40.0, 0.05, 1e-10);
  const LatticeOperator op(r.field.grid, KernelSpec::fractional(0.5, Normalization::unit_symbol));
  const Vector res = euler_lagrange(op, r.field.values, Potential::quartic(), 1.0);
  double inner = 0.0;
  for (std::size_t i = 0; i < r.field.grid.node_count(); ++i)
    if (std::abs(r.field.grid.position(i)[0]) <= 20.0) inner = std::max(inner, std::abs(res[static_cast<Eigen::Index>(i)]));
  CHECK(inner <= 1e-8);
}
