#include <cmath>

#include "doctest.h"

#include "fracac/energy.hpp"
#include "fracac/errors.hpp"
#include "fracac/scaling.hpp"
#include "fracac/solver.hpp"

using namespace fracac;

namespace {

ScalingExperiment power_trace(double c, double p) {
  ScalingExperiment e;
  for (double R : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    e.abscissae.push_back(R);
    e.values.push_back(c * std::pow(R, p));
  }
  return e;
}

ScalarField axis_layer(const ScalarField& profile, const Point& e, double t, int n, double box, double h) {
  auto f = [profile, e, t](const Point& x) { return profile.sample(Point(e.dot(x) - t, 0.0, 0.0)); };
  return ScalarField::from_function(make_grid(n, box, h, BoundaryModel::from_function(f)), f);
}

}  // namespace

TEST_CASE("log-log fits") {
  const FitResult f = fit_loglog(power_trace(3.0, 1.5));
  CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(fit_loglog(power_trace(21.0, 1.5)).slope == doctest::Approx(f.slope).epsilon(1e-12));
  const FitResult w = fit_interior(power_trace(1.0, 0.5));
  CHECK(w.first == 1);
  CHECK(w.last == 3);
  CHECK(w.slope == doctest::Approx(0.5));

  ScalingExperiment z = power_trace(0.0, 1.0);
  CHECK(fit_loglog(z).degenerate);
  ScalingExperiment bad = power_trace(1.0, 1.0);
  bad.values[2] = -1.0;
  CHECK_THROWS_AS(fit_loglog(bad), ConfigError);
  bad.values.pop_back();
  CHECK_THROWS_AS(fit_loglog(bad), ConfigError);
  ScalingExperiment three = power_trace(1.0, 1.0);
  three.abscissae.resize(3);
  three.values.resize(3);
  CHECK_THROWS_AS(fit_interior(three), ConfigError);
}

TEST_CASE("bv traces") {
  const Grid g = make_grid(2, 4.0, 0.125, BoundaryModel::constant(1.0));
  const ScalingExperiment c = bv_scaling(ScalarField::constant(g, 1.0), {1.0, 2.0, 3.0});
  for (double v : c.values) CHECK(v == 0.0);
  CHECK(c.to_csv().rfind("abscissa,value,error_bar\n", 0) == 0);
  CHECK_THROWS_AS(bv_scaling(ScalarField::constant(g, 1.0), {2.0, 1.0}), ConfigError);

  // 1D increasing layer: the variation over B_R is u(R) - u(-R) < 2
  const ScalarField layer = solve_layer_1d(0.5, 20.0, 0.05, 1e-10).field;
  const ScalingExperiment tv = bv_scaling(layer, {2.0, 5.0, 10.0, 19.0});
  for (std::size_t k = 0; k < tv.values.size(); ++k) {
    const double R = tv.abscissae[k];
    CHECK(tv.values[k] == doctest::Approx(layer.sample(Point(R, 0, 0)) - layer.sample(Point(-R, 0, 0))).epsilon(0.01));
    if (k > 0) CHECK(tv.values[k] > tv.values[k - 1]);
  }
  CHECK(tv.values.back() < 2.0);
}

TEST_CASE("potential ratios and decay exponents") {
  const Grid g = make_grid(1, 8.0, 0.125, BoundaryModel::constant(1.0));
  const RatioReport r = pot_vs_sob(ScalarField::constant(g, 1.0), {3.0, 4.0, 5.0}, 2.0,
                                   KernelSpec::fractional(0.5), Potential::quartic());
  CHECK(r.degenerate);

  CHECK(potential_decay_exponent(0.4) == doctest::Approx(0.3));
  CHECK(potential_decay_exponent(0.8) == doctest::Approx(0.1));
  CHECK(potential_decay_exponent(0.2) == doctest::Approx(0.2));

  // eps = 1 is the unit layer itself: 0 < int_{-1}^{1} W(phi) < 2 W(0)
  const ScalingExperiment d = potential_decay(0.5, {1.0}, 20.0, 0.05);
  REQUIRE(d.values.size() == 1);
  CHECK(d.values[0] > 0.0);
  CHECK(d.values[0] < 0.5);
}

TEST_CASE("density implication examples") {
  const Grid g = make_grid(1, 8.0, 0.125, BoundaryModel::constant(-1.0));
  const DensityReport minus = density_check(ScalarField::constant(g, -1.0), 4.0);
  CHECK(minus.hypothesis_value == 0.0);
  CHECK(minus.minus_side == DensityOutcome::holds);
  CHECK(minus.plus_side == DensityOutcome::vacuous);

  const Grid gp = make_grid(1, 8.0, 0.125, BoundaryModel::constant(1.0));
  const DensityReport plus = density_check(ScalarField::constant(gp, 1.0), 4.0);
  CHECK(plus.minus_side == DensityOutcome::vacuous);
  CHECK(plus.plus_side == DensityOutcome::holds);

  const ScalarField profile = solve_layer_1d(0.5, 40.0, 0.125, 1e-10).field;
  const DensityReport centred = density_check(axis_layer(profile, Point::UnitX(), 0.0, 1, 8.0, 0.125), 4.0);
  CHECK(centred.minus_side == DensityOutcome::vacuous);
  CHECK(centred.plus_side == DensityOutcome::vacuous);
  const DensityReport far = density_check(axis_layer(profile, Point::UnitX(), 24.0, 1, 8.0, 0.125), 4.0);
  CHECK(far.minus_side == DensityOutcome::holds);

  CHECK_THROWS_AS(density_check(ScalarField::constant(g, -1.0), 4.0, {1.5, 0.25, 4.0}), ConfigError);
  CHECK_THROWS_AS(density_check(ScalarField::constant(g, -1.0), 2.0), ConfigError);
  CHECK(to_string(DensityOutcome::counterexample) == "counterexample");
}

TEST_CASE("blow-down and flatness of a sign field") {
  const Grid g = make_grid(2, 20.0, 0.125, BoundaryModel::sided(1.0, -1.0));
  const ScalarField u = ScalarField::from_function(g, [](const Point& x) { return x[0] > 0.0 ? 1.0 : -1.0; });
  const BlowdownTrace b = blowdown_convergence(u, {2.0, 4.0, 8.0, 16.0});
  for (std::size_t k = 0; k < b.radii.size(); ++k) {
    // the jump sits within one lattice cell h / R of the hyperplane after rescaling
    CHECK(b.l1[k] <= 2.0 * 2.0 * 0.125 / b.radii[k] + 1e-12);
    CHECK(b.hausdorff[k] <= 0.125 / b.radii[k] + 2.0 / 64.0);
  }
  CHECK(b.normal_angle_deg(Point::UnitX()) < 1.0);
  const auto f = flatness_profile(u, {4.0, 8.0, 16.0});
  for (const FlatnessPoint& p : f) CHECK(p.a <= 2.0 * 0.125 / p.R);

  const ScalarField checker = ScalarField::from_function(g, [](const Point& x) {
    return (static_cast<int>(std::floor(x[0])) + static_cast<int>(std::floor(x[1]))) % 2 == 0 ? 1.0 : -1.0;
  });
  // unit cells of both signs reach the sphere from every side: no slab trapping
  for (const FlatnessPoint& p : flatness_profile(checker, {6.0})) CHECK(p.a > 0.9);
}

TEST_CASE("interpolation ratio") {
  const Grid g = make_grid(2, 4.0, 0.125, BoundaryModel::constant(-1.0));
  CHECK(interpolation_check(ScalarField::constant(g, -1.0), 3.5, 0.5).degenerate);
  CHECK_THROWS_AS(interpolation_check(ScalarField::constant(g, -1.0), 3.5, 1.0), ConfigError);

  const ScalarField profile = solve_layer_1d(0.5, 40.0, 0.125, 1e-10).field;
  const InterpolationRatio centred =
      interpolation_check(axis_layer(profile, Point::UnitX(), 0.0, 2, 4.0, 0.125), 3.5, 0.5);
  const InterpolationRatio far = interpolation_check(axis_layer(profile, Point::UnitX(), 3.0, 2, 4.0, 0.125), 3.5, 0.5);
  CHECK_FALSE(far.degenerate);
  CHECK(far.V < centred.V);
  CHECK(far.ratio < frozen::interpolation_constant);

  // fields outside the calibration seed stay below the frozen constant
  for (const ScalarField& f : random_smooth_fields(g, 10, 99)) {
    const InterpolationRatio r = interpolation_check(f, 3.5, 0.5);
    if (!r.degenerate) CHECK(r.ratio <= frozen::interpolation_constant);
  }
  const auto a = random_smooth_fields(g, 2, 5), b = random_smooth_fields(g, 2, 5);
  CHECK(a[1].values == b[1].values);
}

TEST_CASE("Sobolev energy against the BV norm on tilted layers") {
  // the frozen constant was calibrated on axis layers; tilted ones are held out
  const KernelSpec spec = KernelSpec::fractional(0.5);
  const ScalarField profile = solve_layer_1d(0.5, 40.0, 0.125, 1e-10).field;
  const Point e(std::cos(M_PI / 6.0), std::sin(M_PI / 6.0), 0.0);
  const BallRegion B4{Point::Zero(), 4.0};
  for (double t : {0.0, 4.0, 12.0}) {
    const ScalarField u = axis_layer(profile, e, t, 2, 8.0, 0.125);
    const double lhs = (1.0 - spec.s) * energy_sobolev(u, B4, spec);
    CHECK(lhs <= frozen::sobolev_bv_constant * (1.0 + gradient_l1_norm(u, B4)));
  }
}
