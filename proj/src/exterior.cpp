#include "fracac/exterior.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracac/numerics.hpp"

namespace fracac {

namespace {

constexpr int kRadialPoints = 16;

}  // namespace

RadialLaw power_law(int n, double s, double pref, std::function<double(double)> rho) {
  (void)n;  // the r^{n-1} Jacobian cancels against |z|^{-n-s}
  RadialLaw law;
  if (!rho) {
    law.segment = [s, pref](double a, double b) {
      const double tail_b = std::isinf(b) ? 0.0 : std::pow(b, -s);
      return pref * (std::pow(a, -s) - tail_b) / s;
    };
  } else {
    law.segment = [s, pref, rho](double a, double b) {
      const double sb = std::isinf(b) ? 0.0 : std::pow(a / b, s);
      const double inv = -1.0 / s;
      auto f = [&](double sigma) { return rho(a * std::pow(sigma, inv)); };
      return pref * std::pow(a, -s) / s * gauss_integrate(f, sb, 1.0, 16);
    };
  }
  law.nodes = [s, pref, rho](double a, std::vector<double>& r, std::vector<double>& w) {
    const GaussRule& rule = gauss_legendre(kRadialPoints);
    const double inv = -1.0 / s, scale = pref * std::pow(a, -s) / s;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double sigma = 0.5 * (1.0 + rule.x[i]);
      const double ri = a * std::pow(sigma, inv);
      r.push_back(ri);
      w.push_back(0.5 * rule.w[i] * scale * (rho ? rho(ri) : 1.0));
    }
  };
  return law;
}

RadialLaw poisson_law(int n, double s, double y) {
  const double area = unit_sphere_area(n);
  const double a = 0.5 * n, b = 0.5 * s;
  RadialLaw law;
  // tail(r) = mass beyond r = ibetac(n/2, s/2, r^2 / (r^2 + y^2)) / |S^{n-1}|
  auto tail = [=](double r) {
    if (std::isinf(r)) return 0.0;
    const double x = r * r / (r * r + y * y);
    return boost::math::ibetac(a, b, x) / area;
  };
  law.segment = [tail](double lo, double hi) { return tail(lo) - tail(hi); };
  law.nodes = [=](double lo, std::vector<double>& r, std::vector<double>& w) {
    const double total = tail(lo);
    if (total <= 0.0) return;
    const GaussRule& rule = gauss_legendre(kRadialPoints);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double mu = 0.5 * total * (1.0 + rule.x[i]);
      const double q = std::clamp(mu * area, 1e-300, 1.0);
      const double om = boost::math::ibeta_inv(b, a, q);  // 1 - r^2/(r^2+y^2)
      r.push_back(om <= 0.0 ? kInf : y * std::sqrt((1.0 - om) / om));
      w.push_back(0.5 * total * rule.w[i]);
    }
  };
  return law;
}

double ray_exit(const Grid& g, const Point& x, const Point& theta) {
  double r = kInf;
  for (int a = 0; a < g.dim; ++a) {
    if (theta[a] > 0.0)
      r = std::min(r, (g.box_radius - x[a]) / theta[a]);
    else if (theta[a] < 0.0)
      r = std::min(r, (-g.box_radius - x[a]) / theta[a]);
  }
  return r;
}

namespace {

ExteriorMoments ray_moments(const Grid& g, const Point& x, const Point& theta, const RadialLaw& law) {
  const BoundaryModel& bm = g.boundary;
  const double rb = ray_exit(g, x, theta);
  ExteriorMoments m;
  if (bm.kind == BoundaryKind::exterior_constant) {
    const double ez0 = bm.direction.dot(x);
    const double et = bm.direction.dot(theta);
    const double far = et > 0.0 ? bm.plus : et < 0.0 ? bm.minus : (ez0 > 0.0 ? bm.plus : bm.minus);
    double rc = -1.0;
    if (et != 0.0) rc = -ez0 / et;
    if (rc > rb) {
      const double near = et > 0.0 ? bm.minus : bm.plus;
      const double m1 = law.segment(rb, rc), m2 = law.segment(rc, kInf);
      m.mass = m1 + m2;
      m.first = near * m1 + far * m2;
      m.second = near * near * m1 + far * far * m2;
    } else {
      const double m0 = law.segment(rb, kInf);
      m.mass = m0;
      m.first = far * m0;
      m.second = far * far * m0;
    }
    return m;
  }
  // exterior_field: radial quadrature against the sampled data
  m.mass = law.segment(rb, kInf);
  thread_local std::vector<double> rs, ws;
  rs.clear();
  ws.clear();
  law.nodes(rb, rs, ws);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (std::isinf(rs[i])) continue;
    const double v = bm.exterior_value(x + rs[i] * theta);
    m.first += ws[i] * v;
    m.second += ws[i] * v * v;
  }
  return m;
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  return a < 0.0 ? a + 2.0 * M_PI : a;
}

ExteriorMoments moments_2d(const Grid& g, const Point& x, const RadialLaw& law) {
  const double L = g.box_radius;
  std::vector<double> cuts;
  for (int sx = -1; sx <= 1; sx += 2)
    for (int sy = -1; sy <= 1; sy += 2) cuts.push_back(wrap_angle(std::atan2(sy * L - x[1], sx * L - x[0])));
  const BoundaryModel& bm = g.boundary;
  const bool sided = bm.kind == BoundaryKind::exterior_constant;
  if (sided) {
    const double e0 = bm.direction[0], e1 = bm.direction[1];
    const double t0 = -e1, t1 = e0;
    const double tn = std::hypot(t0, t1);
    if (tn > 0.0) {
      cuts.push_back(wrap_angle(std::atan2(t1, t0)));
      cuts.push_back(wrap_angle(std::atan2(-t1, -t0)));
      const double tau = L / std::max(std::abs(t0), std::abs(t1));
      for (int sg = -1; sg <= 1; sg += 2) {
        const double px = sg * tau * t0, py = sg * tau * t1;
        const double dx = px - x[0], dy = py - x[1];
        if (dx * dx + dy * dy > 0.0) cuts.push_back(wrap_angle(std::atan2(dy, dx)));
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());
  const double max_piece = sided ? M_PI / 8.0 : M_PI / 16.0;
  const int pts = sided ? 12 : 8;
  const GaussRule& rule = gauss_legendre(pts);
  ExteriorMoments total;
  const std::size_t k = cuts.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double a = cuts[i];
    double b = i + 1 < k ? cuts[i + 1] : cuts[0] + 2.0 * M_PI;
    const int sub = std::max(1, static_cast<int>(std::ceil((b - a) / max_piece)));
    const double len = (b - a) / sub;
    for (int p = 0; p < sub; ++p) {
      const double lo = a + p * len;
      const double mid = lo + 0.5 * len, half = 0.5 * len;
      for (int q = 0; q < pts; ++q) {
        const double phi = mid + half * rule.x[q];
        const Point theta(std::cos(phi), std::sin(phi), 0.0);
        ExteriorMoments m = ray_moments(g, x, theta, law);
        m *= rule.w[q] * half;
        total += m;
      }
    }
  }
  return total;
}

ExteriorMoments moments_3d(const Grid& g, const Point& x, const RadialLaw& law) {
  constexpr int panels = 3;
  constexpr int pts = 5;
  const GaussRule& rule = gauss_legendre(pts);
  ExteriorMoments total;
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign = -1; sign <= 1; sign += 2) {
      Point nf = Point::Zero();
      nf[axis] = sign;
      Point t1 = Point::Zero(), t2 = Point::Zero();
      t1[(axis + 1) % 3] = 1.0;
      t2[(axis + 2) % 3] = 1.0;
      for (int pu = 0; pu < panels; ++pu)
        for (int pv = 0; pv < panels; ++pv) {
          const double ulo = -1.0 + 2.0 * pu / panels, vlo = -1.0 + 2.0 * pv / panels;
          const double half = 1.0 / panels;
          for (int i = 0; i < pts; ++i)
            for (int j = 0; j < pts; ++j) {
              const double u = ulo + half * (1.0 + rule.x[i]);
              const double v = vlo + half * (1.0 + rule.x[j]);
              const double q = 1.0 + u * u + v * v;
              const Point theta = (nf + u * t1 + v * t2) / std::sqrt(q);
              ExteriorMoments m = ray_moments(g, x, theta, law);
              m *= rule.w[i] * rule.w[j] * half * half / (q * std::sqrt(q));
              total += m;
            }
        }
    }
  }
  return total;
}

}  // namespace

ExteriorMoments exterior_moments(const Grid& g, const Point& x, const RadialLaw& law) {
  if (!g.boundary.has_exterior()) return {};
  if (g.dim == 1) {
    ExteriorMoments m = ray_moments(g, x, Point(1.0, 0.0, 0.0), law);
    m += ray_moments(g, x, Point(-1.0, 0.0, 0.0), law);
    return m;
  }
  if (g.dim == 2) return moments_2d(g, x, law);
  return moments_3d(g, x, law);
}

}  // namespace fracac
