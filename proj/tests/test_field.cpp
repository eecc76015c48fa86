#include <cmath>

#include "doctest.h"

#include "fracac/errors.hpp"
#include "fracac/field.hpp"
#include "fracac/solver.hpp"

using namespace fracac;

TEST_CASE("grid construction") {
  const Grid g = make_grid(1, 4.0, 0.5, BoundaryModel::periodic());
  CHECK(g.nodes_per_axis == 16);
  CHECK(g.node_count() == 16);
  const Grid g2 = make_grid(2, 1.0, 0.25, BoundaryModel::sided(1.0, -1.0));
  CHECK(g2.nodes_per_axis == 8);
  CHECK(g2.node_count() == 64);
  CHECK(g2.boundary.exterior_value(Point(2.0, 0.0, 0.0)) == 1.0);
  CHECK(g2.boundary.exterior_value(Point(-2.0, 0.0, 0.0)) == -1.0);
  CHECK_THROWS_AS(make_grid(1, 1.0, 0.3, BoundaryModel::periodic()), ConfigError);
}

TEST_CASE("linear index round trip") {
  const Grid g = make_grid(3, 1.0, 0.25, BoundaryModel::constant(0.0));
  for (std::size_t i = 0; i < g.node_count(); i += 37) CHECK(g.linear_index(g.multi_index(i)) == i);
  CHECK(g.position(0)[0] == doctest::Approx(-1.0 + 0.125));
}

TEST_CASE("blow-down rescaling") {
  const Grid g = make_grid(1, 4.0, 0.25, BoundaryModel::sided(1.0, -1.0));
  const ScalarField sign = ScalarField::from_function(g, [](const Point& x) { return x[0] > 0 ? 1.0 : -1.0; });
  const ScalarField v = rescale_blowdown(sign, 3.0);
  CHECK((v.values - sign.values).cwiseAbs().maxCoeff() == 0.0);

  const Grid gl = make_grid(1, 8.0, 0.25, BoundaryModel::from_function([](const Point& x) { return x[0]; }));
  const ScalarField lin = ScalarField::from_function(gl, [](const Point& x) { return x[0]; });
  const ScalarField w = rescale_blowdown(lin, 2.0);
  for (std::size_t i = 0; i < gl.node_count(); ++i) {
    const double x = gl.position(i)[0];
    if (std::abs(x) < 3.5) CHECK(w.values[static_cast<Eigen::Index>(i)] == doctest::Approx(2.0 * x));
  }
}

TEST_CASE("blow-down narrows the layer width") {
  const ScalarField layer = solve_layer_1d(0.5, 40.0, 0.05, 1e-10).field;
  auto width = [](const ScalarField& u) {
    int count = 0;
    for (Eigen::Index i = 0; i < u.values.size(); ++i) count += std::abs(u.values[i]) <= 0.9;
    return count * u.grid.h;
  };
  const ScalarField v = rescale_blowdown(layer, 8.0);
  CHECK(width(v) / width(layer) == doctest::Approx(1.0 / 8.0).epsilon(0.05));
}

TEST_CASE("L1 distance") {
  const Grid g = make_grid(1, 2.0, 0.5, BoundaryModel::constant(0.0));
  const ScalarField p = ScalarField::constant(g, 1.0), m = ScalarField::constant(g, -1.0);
  CHECK(l1_distance(p, p, BallRegion{Point::Zero(), 1.0}) == 0.0);
  CHECK(l1_distance(p, m, BallRegion{Point::Zero(), 1.0}) == doctest::Approx(4.0).epsilon(2.0 * 0.5 / 4.0));
}

TEST_CASE("gradient L1 norm") {
  const Grid g = make_grid(2, 2.0, 0.05, BoundaryModel::from_function([](const Point& x) { return x[0]; }));
  CHECK(gradient_l1_norm(ScalarField::constant(g, 0.3), BallRegion{Point::Zero(), 1.0}) == 0.0);
  const ScalarField lin = ScalarField::from_function(g, [](const Point& x) { return x[0]; });
  CHECK(gradient_l1_norm(lin, BallRegion{Point::Zero(), 1.0}) == doctest::Approx(M_PI).epsilon(0.02));
}

TEST_CASE("total variation of the layer approaches 2") {
  const ScalarField layer = solve_layer_1d(0.5, 40.0, 0.05, 1e-10).field;
  double last = 0.0;
  for (double R : {2.0, 4.0, 8.0, 16.0}) {
    const double tv = gradient_l1_norm(layer, BallRegion{Point::Zero(), R});
    CHECK(tv > last);
    CHECK(tv < 2.0);
    last = tv;
  }
  CHECK(last > 1.6);
}

TEST_CASE("level sets and Hausdorff distance") {
  const Grid g = make_grid(1, 2.0, 0.05, BoundaryModel::constant(1.0));
  const IndicatorSet full = level_set(ScalarField::constant(g, 1.0), 0.0);
  CHECK(full.count() == g.node_count());
  const ScalarField lin = ScalarField::from_function(g, [](const Point& x) { return std::clamp(x[0], -1.0, 1.0); });
  const IndicatorSet half = level_set(lin, 0.0);
  for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(half.membership[i] == (g.position(i)[0] >= 0.0));
  const ScalarField shifted = ScalarField::from_function(g, [](const Point& x) { return x[0] - 0.5; });
  const BallRegion b2{Point::Zero(), 2.0};
  CHECK(hausdorff_distance(half, half, b2) == 0.0);
  CHECK(hausdorff_distance(half, level_set(shifted, 0.0), b2) == doctest::Approx(0.5));
}

TEST_CASE("layer zero level set sits at the origin") {
  const ScalarField layer = solve_layer_1d(0.5, 40.0, 0.05, 1e-10).field;
  const IndicatorSet up = level_set(layer, 0.0);
  double x0 = 1e9;
  for (std::size_t i = 0; i < layer.grid.node_count(); ++i)
    if (up.membership[i]) x0 = std::min(x0, layer.grid.position(i)[0]);
  double lip = 0.0;
  for (Eigen::Index i = 1; i < layer.values.size(); ++i)
    lip = std::max(lip, std::abs(layer.values[i] - layer.values[i - 1]) / layer.grid.h);
  CHECK(std::abs(layer.sample(Point(x0, 0, 0))) <= lip * layer.grid.h);
}

TEST_CASE("profile embedding") {
  const Grid p1 = make_grid(1, 4.0, 0.1, BoundaryModel::constant(1.0));
  const Grid g = make_grid(2, 2.0, 0.1, BoundaryModel::constant(1.0));
  const ScalarField one = embed_profile(ScalarField::constant(p1, 1.0), Point::UnitX(), g);
  CHECK(one.values.minCoeff() == 1.0);
  const Grid ps = make_grid(1, 4.0, 0.1, BoundaryModel::sided(1.0, -1.0));
  const ScalarField sign = ScalarField::from_function(ps, [](const Point& x) { return x[0] > 0 ? 1.0 : -1.0; });
  const ScalarField e = embed_profile(sign, Point::UnitX(), g);
  for (std::size_t i = 0; i < g.node_count(); ++i)
    CHECK(e.values[static_cast<Eigen::Index>(i)] == (g.position(i)[0] > 0 ? 1.0 : -1.0));
}

TEST_CASE("tilted layer level set follows the diagonal") {
  const ScalarField layer = solve_layer_1d(0.5, 40.0, 0.05, 1e-10).field;
  const Grid g = make_grid(2, 4.0, 0.125, BoundaryModel::constant(0.0));
  const Point e = Point(1.0, 1.0, 0.0).normalized();
  const IndicatorSet up = level_set(embed_profile(layer, e, g), 0.0);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const double d = e.dot(g.position(i));
    if (std::abs(d) > g.h) CHECK(up.membership[i] == (d > 0.0));
  }
}

TEST_CASE("field serialization round trip") {
  const Grid g = make_grid(2, 1.0, 0.25, BoundaryModel::sided(1.0, -1.0));
  const ScalarField u = ScalarField::from_function(g, [](const Point& x) { return std::sin(3.0 * x[0]) * x[1]; });
  const ScalarField v = field_from_string(field_to_string(u));
  CHECK(v.grid.same_lattice(g));
  CHECK((v.values - u.values).cwiseAbs().maxCoeff() == 0.0);
}
