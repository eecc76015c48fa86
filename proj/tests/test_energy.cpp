#include <cmath>
#include <random>

#include "doctest.h"

#include "fracac/energy.hpp"
#include "fracac/solver.hpp"

using namespace fracac;

namespace {

IndicatorSet set_from(const Grid& g, const std::function<bool(const Point&)>& in) {
  Mask m(g.node_count());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = in(g.position(i));
  return IndicatorSet{g, m};
}

}  // namespace

TEST_CASE("energies of constants and wells") {
  const Grid g = make_grid(1, 2.0, 0.1, BoundaryModel::constant(0.3));
  const KernelSpec spec = KernelSpec::fractional(0.5);
  const BallRegion b1{Point::Zero(), 1.0};
  CHECK(energy_sobolev(ScalarField::constant(g, 0.3), b1, spec) == doctest::Approx(0.0).epsilon(1e-12));
  const Potential W = Potential::quartic();
  CHECK(energy_potential(ScalarField::constant(g, 1.0), b1, W, 1.0, 0.5) == 0.0);
  CHECK(energy_potential(ScalarField::constant(g, -1.0), b1, W, 1.0, 0.5) == 0.0);
  CHECK(energy_potential(ScalarField::constant(g, 0.0), b1, W, 1.0, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("half-line perimeter in (-1, 1)") {
  // int_E int_{E^c} pieces integrate to 2^{1-s} / (s (1 - s))
  for (double s : {0.3, 0.5, 0.8}) {
    const Grid g = make_grid(1, 2.0, 0.05, BoundaryModel::sided(1.0, -1.0));
    const IndicatorSet E = set_from(g, [](const Point& x) { return x[0] > 0.0; });
    const double expected = std::pow(2.0, 1.0 - s) / (s * (1.0 - s));
    CHECK(fractional_perimeter(E, BallRegion{Point::Zero(), 1.0}, s) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("perimeter of the complement and the energy identity") {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.4);
  const Grid g = make_grid(2, 1.0, 0.125, BoundaryModel::constant(-1.0));
  Mask m(g.node_count());
  for (auto& v : m) v = coin(rng);
  const IndicatorSet E{g, m};
  Grid gc = g;
  gc.boundary = BoundaryModel::constant(1.0);
  Mask mc(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) mc[i] = !m[i];
  const IndicatorSet Ec{gc, mc};
  const BallRegion region{Point::Zero(), 0.75};
  const double s = 0.5;
  CHECK(fractional_perimeter(E, region, s) == doctest::Approx(fractional_perimeter(Ec, region, s)).epsilon(1e-12));
  CHECK(perimeter_energy_identity(E, region, s).residual <= 1e-12);

  const Grid gs = make_grid(2, 1.0, 0.125, BoundaryModel::sided(1.0, -1.0));
  CHECK(perimeter_energy_identity(set_from(gs, [](const Point& x) { return x[0] > 0.0; }), region, s).residual <=
        1e-12);
  const IndicatorSet checker = set_from(g, [&](const Point& x) {
    return (static_cast<int>(std::floor(x[0] / 0.25)) + static_cast<int>(std::floor(x[1] / 0.25))) % 2 == 0;
  });
  CHECK(perimeter_energy_identity(checker, region, s).residual <= 1e-12);
  CHECK(fractional_perimeter(set_from(g, [](const Point&) { return false; }), region, s) == 0.0);
}

TEST_CASE("Sobolev energy of a smooth bump under refinement") {
  const KernelSpec spec = KernelSpec::fractional(0.5);
  auto bump = [](const Point& x) { return std::exp(-4.0 * x.squaredNorm()); };
  auto at = [&](double h) {
    const Grid g = make_grid(2, 2.0, h, BoundaryModel::constant(0.0));
    return energy_sobolev(ScalarField::from_function(g, bump), BallRegion{Point::Zero(), 1.0}, spec);
  };
  const double coarse = at(0.0625), fine = at(0.03125);
  CHECK(std::abs(coarse - fine) <= 0.01 * fine);
}

TEST_CASE("domain variations") {
  const Grid g = make_grid(2, 6.0, 0.25, BoundaryModel::sided(1.0, -1.0));
  const ScalarField u = ScalarField::from_function(g, [](const Point& x) { return std::tanh(x[0]); });
  VariationMap still{Point::UnitX(), 0.0};
  CHECK((domain_variation(u, still).values - u.values).cwiseAbs().maxCoeff() < 1e-12);
  const ScalarField c = ScalarField::constant(g, 0.4);
  VariationMap move{Point::UnitX(), 0.1};
  CHECK((domain_variation(c, move).values - c.values).cwiseAbs().maxCoeff() < 1e-12);
  // pure translation on B_2; x - 0.25 e1 is a node, so the sample is exact
  VariationMap shift{Point::UnitX(), 0.25};
  const ScalarField ut = domain_variation(u, shift);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Point x = g.position(i);
    if (x.norm() < 1.5) CHECK(ut.values[static_cast<Eigen::Index>(i)] == doctest::Approx(std::tanh(x[0] - 0.25)));
  }
}

TEST_CASE("translation second difference") {
  const KernelSpec spec = KernelSpec::fractional(0.5);
  const Potential W = Potential::quartic();
  const Grid g = make_grid(2, 6.0, 0.25, BoundaryModel::constant(1.0));
  const TranslationComparison flat =
      translation_comparison(ScalarField::constant(g, 1.0), VariationMap{Point::UnitX(), 0.05}, spec, W);
  CHECK(std::abs(flat.second_difference) < 1e-12);

  const ScalarField layer = solve_layer_1d(0.5, 20.0, 0.125, 1e-10).field;
  const Grid g2 = make_grid(2, 6.0, 0.125, BoundaryModel::from_function([layer](const Point& x) {
                              return layer.sample(Point(x[0], 0, 0));
                            }));
  const ScalarField u = embed_profile(layer, Point::UnitX(), g2);
  std::vector<double> ratios;
  for (double t : {0.05, 0.025, 0.0125}) {
    const TranslationComparison r = translation_comparison(u, VariationMap{Point::UnitX(), t}, spec, W);
    CHECK(std::abs(r.potential_part) <= 10.0 * g2.h * t);
    REQUIRE(r.ratio_defined);
    ratios.push_back(r.bound_ratio);
  }
  for (double r : ratios) CHECK(std::abs(r) < 10.0 * std::abs(ratios.front()) + 1.0);
}

TEST_CASE("max-min identity") {
  CHECK(maxmin_identity_check(0.5, 0.2, -0.3, 0.1) < 1e-15);
  CHECK(maxmin_identity_check(0.3, 0.3, -0.7, -0.7) == 0.0);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k) worst = std::max(worst, maxmin_identity_check(U(rng), U(rng), U(rng), U(rng)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("energy breakdown json") {
  const Grid g = make_grid(1, 2.0, 0.1, BoundaryModel::constant(0.0));
  const EnergyBreakdown e = energy(ScalarField::constant(g, 0.0), BallRegion{Point::Zero(), 1.0},
                                   KernelSpec::fractional(0.5), Potential::quartic());
  CHECK(e.total() == doctest::Approx(0.5));
  CHECK(e.to_json().find("\"potential\": 0.5") != std::string::npos);
}
