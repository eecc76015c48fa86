#pragma once

#include <functional>
#include <vector>

#include "fracac/field.hpp"

namespace fracac {

/// A radially symmetric density f(r) integrated along rays with the polar
/// Jacobian r^{n-1}.
struct RadialLaw {
  /// int_a^b f(r) r^{n-1} dr; b may be +infinity.
  std::function<double(double, double)> segment;
  /// Quadrature for int_a^infinity f(r) r^{n-1} g(r) dr: appends (r_i, w_i)
  /// so the integral is sum w_i g(r_i).
  std::function<void(double, std::vector<double>&, std::vector<double>&)> nodes;
};

/// pref * rho(r) * r^{-n-s}. Segments are closed form when rho is empty.
RadialLaw power_law(int n, double s, double pref, std::function<double(double)> rho = {});

/// Poisson kernel of the s-extension at height y, normalized to unit mass.
RadialLaw poisson_law(int n, double s, double y);

/// Moments of the exterior data seen from a point x inside the box:
/// mass = int_ext f, first = int_ext f u_ext, second = int_ext f u_ext^2.
struct ExteriorMoments {
  double mass = 0.0;
  double first = 0.0;
  double second = 0.0;
  ExteriorMoments& operator+=(const ExteriorMoments& o) {
    mass += o.mass;
    first += o.first;
    second += o.second;
    return *this;
  }
  ExteriorMoments& operator*=(double c) {
    mass *= c;
    first *= c;
    second *= c;
    return *this;
  }
};

/// Integrates the law over R^n minus the box of `g`, centred at x, against the
/// exterior model of `g`. Angular quadrature: two rays in 1D, Gauss pieces
/// between kink angles in 2D, gnomonic cube-map panels in 3D.
ExteriorMoments exterior_moments(const Grid& g, const Point& x, const RadialLaw& law);

/// Distance from x (inside the box) to the box boundary along unit direction theta.
double ray_exit(const Grid& g, const Point& x, const Point& theta);

}  // namespace fracac
