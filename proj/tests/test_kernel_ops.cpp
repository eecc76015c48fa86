#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

#include "fracac/field.hpp"
#include "fracac/kernel.hpp"
#include "fracac/lattice.hpp"
#include "fracac/numerics.hpp"
#include "fracac/operators.hpp"

using namespace fracac;

TEST_CASE("kernel values") {
  Eigen::VectorXd z(1);
  z << 2.0;
  CHECK(kernel_value(KernelSpec::fractional(1.0), z) == doctest::Approx(0.25));
  z << 1.0;
  CHECK(kernel_value(KernelSpec::fractional(0.5), z) == doctest::Approx(1.5));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const KernelSpec g = KernelSpec::general(0.4, 0.5, 2.0, [](double r) { return 1.0 + 0.5 * std::sin(r); });
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd y(2);
    y << normal(rng), normal(rng);
    CHECK(kernel_value(g, y) == kernel_value(g, -y));
  }
}

TEST_CASE("unit symbol constant against the closed form") {
  // c(1, s) = s 2^{s-1} Gamma((1+s)/2) / (sqrt(pi) Gamma(1 - s/2))
  for (double s : {0.3, 0.5, 0.9}) {
    const double expected =
        s * std::pow(2.0, s - 1.0) * std::tgamma(0.5 * (1.0 + s)) / (std::sqrt(M_PI) * std::tgamma(1.0 - 0.5 * s));
    CHECK(unit_symbol_constant(1, s) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(closed_form_symbol(KernelSpec::fractional(s, Normalization::unit_symbol), 2) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("special functions") {
  CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
  CHECK(epstein_zeta(1, 2.0) == doctest::Approx(M_PI * M_PI / 3.0).epsilon(1e-10));
  CHECK(epstein_zeta(1, 4.0) == doctest::Approx(2.0 * std::pow(M_PI, 4) / 90.0).epsilon(1e-10));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI));
  CHECK(gauss_integrate([](double x) { return x * x * x * x; }, 0.0, 1.0, 3) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("fft round trip") {
  std::vector<std::complex<double>> a(64), b;
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = {std::sin(0.3 * k), std::cos(1.7 * k)};
  b = a;
  fft_nd(b, 2, 8, false);
  fft_nd(b, 2, 8, true);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);
}

TEST_CASE("mapped cell integral") {
  const double s = 0.5;
  const std::array<int, 3> d{2, 1, 0};
  CHECK(cell_pair_integral_mapped(2, s, d, Eigen::Matrix3d::Identity()) ==
        doctest::Approx(cell_pair_integral(2, s, d)).epsilon(1e-12));
  // quarter turns permute the tent weights, so they just rotate the offset
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  rot.topLeftCorner<2, 2>() << 0, -1, 1, 0;
  CHECK(cell_pair_integral_mapped(2, s, d, rot) == doctest::Approx(cell_pair_integral(2, s, {-1, 2, 0})).epsilon(1e-10));
  // homogeneity of degree -n-s
  CHECK(cell_pair_integral_mapped(2, s, d, 2.0 * Eigen::Matrix3d::Identity()) ==
        doctest::Approx(std::pow(2.0, -2.5) * cell_pair_integral(2, s, d)).epsilon(1e-10));
}

TEST_CASE("cell integral against tensor Gauss quadrature far from the singularity") {
  const double s = 0.7;
  const std::array<int, 3> d{3, 2, 0};
  double acc = 0.0;
  const GaussRule& r = gauss_legendre(24);
  for (std::size_t i = 0; i < r.x.size(); ++i)
    for (std::size_t j = 0; j < r.x.size(); ++j) {
      for (int qa = 0; qa < 2; ++qa)
        for (int qb = 0; qb < 2; ++qb) {
          // split [-1, 1] at the kink of the tent weight
          const double va = qa ? 0.5 * (r.x[i] + 1.0) : 0.5 * (r.x[i] - 1.0);
          const double vb = qb ? 0.5 * (r.x[j] + 1.0) : 0.5 * (r.x[j] - 1.0);
          const double w = 0.25 * r.w[i] * r.w[j] * (1.0 - std::abs(va)) * (1.0 - std::abs(vb));
          acc += w * std::pow(std::hypot(d[0] + va, d[1] + vb), -2.0 - s);
        }
    }
  CHECK(cell_pair_integral(2, s, d) == doctest::Approx(acc).epsilon(1e-9));
}

TEST_CASE("quadrature operator basics") {
  const KernelSpec spec = KernelSpec::fractional(0.5);
  const Grid g = make_grid(1, 4.0, 0.125, BoundaryModel::constant(0.7));
  CHECK(apply_LK_quadrature(ScalarField::constant(g, 0.7), spec).values.cwiseAbs().maxCoeff() < 1e-12);
  const Grid go = make_grid(1, 4.0, 0.125, BoundaryModel::sided(1.0, -1.0));
  const ScalarField odd = ScalarField::from_function(go, [](const Point& x) { return std::tanh(x[0]); });
  const ScalarField Lu = apply_LK_quadrature(odd, spec);
  // nodes mirror pairwise about the origin, so L u is odd too
  const Eigen::Index N = Lu.values.size();
  for (Eigen::Index i = 0; i < N / 2; ++i) CHECK(Lu.values[i] == doctest::Approx(-Lu.values[N - 1 - i]).epsilon(1e-10));
}

TEST_CASE("periodic mode against the continuum symbol") {
  const KernelSpec spec = KernelSpec::fractional(0.5, Normalization::unit_symbol);
  const Grid g = make_grid(1, M_PI, M_PI / 256.0, BoundaryModel::periodic());
  const ScalarField c = ScalarField::from_function(g, [](const Point& x) { return std::cos(3.0 * x[0]); });
  const ScalarField Lc = apply_LK_quadrature(c, spec);
  const double expected = std::pow(3.0, 0.5);
  for (Eigen::Index i = 0; i < c.values.size(); i += 17) CHECK(Lc.values[i] == doctest::Approx(expected * c.values[i]).epsilon(1e-3).scale(1.0));
}

TEST_CASE("spectral operator") {
  const Grid g = make_grid(1, M_PI, M_PI / 64.0, BoundaryModel::periodic());
  const KernelSpec spec = KernelSpec::fractional(0.7, Normalization::unit_symbol);
  CHECK(apply_fraclap_spectral(ScalarField::constant(g, 2.0), spec).values.cwiseAbs().maxCoeff() < 1e-12);
  auto mode = [&](double k) {
    return ScalarField::from_function(g, [k](const Point& x) { return std::cos(k * x[0]); });
  };
  const double lam = spectral_calibration(g, spec);
  const ScalarField a = mode(1.0), b = mode(5.0);
  const ScalarField La = apply_fraclap_spectral(a, spec), Lb = apply_fraclap_spectral(b, spec);
  CHECK((La.values - lam * a.values).cwiseAbs().maxCoeff() < 1e-10);
  const ScalarField ab(g, a.values + b.values);
  CHECK((apply_fraclap_spectral(ab, spec).values - La.values - Lb.values).cwiseAbs().maxCoeff() < 1e-10);
  // calibration equals the quadrature response on the lowest mode
  const ScalarField Qa = apply_LK_quadrature(a, spec);
  CHECK(Qa.values[0] == doctest::Approx(lam * a.values[0]).epsilon(1e-10));
}

TEST_CASE("classical stencil") {
  const Grid g = make_grid(2, 2.0, 0.25, BoundaryModel::from_function([](const Point& x) { return x.squaredNorm(); }));
  const ScalarField q = ScalarField::from_function(g, [](const Point& x) { return x.squaredNorm(); });
  CHECK((apply_laplacian(q).values.array() + 4.0).abs().maxCoeff() < 1e-10);
  const double h = M_PI / 32.0;
  const Grid gp = make_grid(1, M_PI, h, BoundaryModel::periodic());
  const ScalarField c = ScalarField::from_function(gp, [](const Point& x) { return std::cos(x[0]); });
  const double eig = (2.0 - 2.0 * std::cos(h)) / (h * h);
  CHECK((apply_laplacian(c).values - eig * c.values).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(apply_laplacian(ScalarField::constant(gp, 1.0)).values.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("operator consistency") {
  const Grid g = make_grid(1, M_PI, M_PI / 128.0, BoundaryModel::periodic());
  CHECK(operator_consistency(ScalarField::constant(g, 1.0), 0.5, 1e-3).discrepancy == 0.0);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  std::vector<double> a(6);
  for (auto& v : a) v = normal(rng);
  const ScalarField smooth = ScalarField::from_function(g, [&](const Point& x) {
    double v = 0.0;
    for (int k = 0; k < 6; ++k) v += a[k] * std::cos((k + 1) * x[0] + k);
    return v;
  });
  CHECK(operator_consistency(smooth, 0.5, 1e-3).passed);
  // white noise reaches the grid scale, where the two discretizations part
  const ScalarField noise = ScalarField::from_function(g, [&](const Point&) { return normal(rng); });
  CHECK_FALSE(operator_consistency(noise, 0.5, 1e-3).passed);
}
