#include "fracac/potential.hpp"

#include <algorithm>
#include <cmath>

#include "fracac/errors.hpp"

namespace fracac {

namespace {

double sampled_min(const std::function<double(double)>& f, double a, double b, int samples) {
  double m = f(a);
  for (int i = 1; i < samples; ++i) m = std::min(m, f(a + (b - a) * i / (samples - 1)));
  return m;
}

double sampled_max_abs(const std::function<double(double)>& f, int samples) {
  double m = 0.0;
  for (int i = 0; i < samples; ++i) m = std::max(m, std::abs(f(-1.0 + 2.0 * i / (samples - 1))));
  return m;
}

// nu0, nu1 for a given c0, minimized over both signs of t.
std::pair<double, double> constants_for(const Potential& p, double c0, int samples) {
  auto neg_dd = [&](double t) { return std::min(-p.ddW(t), -p.ddW(-t)); };
  auto dd = [&](double t) { return std::min(p.ddW(t), p.ddW(-t)); };
  auto neg_d = [&](double t) { return std::min(-p.dW(t), p.dW(-t)); };
  const double nu0 = std::min(sampled_min(neg_dd, 0.0, c0, samples), sampled_min(dd, 1.0 - c0, 1.0, samples));
  const double nu1 = sampled_min(neg_d, 0.5 * c0, 1.0 - c0, samples);
  return {nu0, nu1};
}

}  // namespace

Potential Potential::quartic() {
  Potential p;
  p.kind = PotentialKind::quartic;
  p.W = [](double u) { return 0.25 * (1.0 - u * u) * (1.0 - u * u); };
  p.dW = [](double u) { return u * u * u - u; };
  p.ddW = [](double u) { return 3.0 * u * u - 1.0; };
  p.c0 = 1.0 - 1.0 / std::sqrt(2.0);
  p.nu0 = 0.5;
  const double t = 0.5 * p.c0;
  p.nu1 = t - t * t * t;
  p.curvature_bound = 2.0;
  return p;
}

Potential Potential::peierls_nabarro() {
  Potential p;
  p.kind = PotentialKind::peierls_nabarro;
  p.W = [](double u) { return (1.0 + std::cos(M_PI * u)) / (M_PI * M_PI); };
  p.dW = [](double u) { return -std::sin(M_PI * u) / M_PI; };
  p.ddW = [](double u) { return -std::cos(M_PI * u); };
  p.c0 = 0.25;
  p.nu0 = std::cos(M_PI / 4.0);
  p.nu1 = std::sin(M_PI / 8.0) / M_PI;
  p.curvature_bound = 1.0;
  return p;
}

Potential Potential::custom(std::function<double(double)> W, std::function<double(double)> dW,
                            std::function<double(double)> ddW) {
  Potential p;
  p.kind = PotentialKind::custom;
  p.W = std::move(W);
  p.dW = std::move(dW);
  p.ddW = std::move(ddW);
  if (!p.W || !p.dW || !p.ddW) throw ConfigError("custom potential needs W, W' and W''");
  const PotentialAudit audit = audit_potential(p);
  if (!audit.passed()) throw ConfigError("custom potential fails the double-well audit");
  constexpr int samples = 4001;
  p.curvature_bound = sampled_max_abs(p.ddW, samples);
  for (double c0 = 0.6; c0 > 1e-3; c0 *= 0.9) {
    const auto [nu0, nu1] = constants_for(p, c0, samples);
    if (nu0 > 0.0 && nu1 > 0.0) {
      p.c0 = c0;
      p.nu0 = nu0;
      p.nu1 = nu1;
      return p;
    }
  }
  throw ConfigError("no admissible structural constants for the custom potential");
}

std::string Potential::name() const {
  switch (kind) {
    case PotentialKind::quartic:
      return "quartic";
    case PotentialKind::peierls_nabarro:
      return "peierls_nabarro";
    case PotentialKind::custom:
      return "custom";
  }
  return "";
}

PotentialAudit audit_potential(const Potential& p, int samples) {
  PotentialAudit a;
  a.wells_vanish = std::abs(p.W(1.0)) < 1e-12 && std::abs(p.W(-1.0)) < 1e-12;
  a.wells_nondegenerate = p.ddW(1.0) > 0.0 && p.ddW(-1.0) > 0.0;
  a.positive_inside = true;
  int sign_changes = 0;
  double prev = p.dW(-1.0 + 2.0 / (samples - 1));
  for (int i = 1; i < samples - 1; ++i) {
    const double t = -1.0 + 2.0 * i / (samples - 1);
    if (!(p.W(t) > 0.0)) a.positive_inside = false;
    const double d = p.dW(t);
    if (i > 1 && ((prev > 0.0 && d <= 0.0) || (prev < 0.0 && d >= 0.0))) {
      ++sign_changes;
      a.critical_point = std::abs(d) < std::abs(prev) ? t : t - 2.0 / (samples - 1);
    }
    prev = d;
  }
  a.single_interior_critical = sign_changes == 1 && p.ddW(a.critical_point) < 0.0;
  return a;
}

bool structural_constants_hold(const Potential& p, int samples) {
  if (!(p.c0 > 0.0 && p.c0 < 2.0 / 3.0 && p.nu0 > 0.0 && p.nu1 > 0.0)) return false;
  const auto [nu0, nu1] = constants_for(p, p.c0, samples);
  return nu0 >= p.nu0 - 1e-12 && nu1 >= p.nu1 - 1e-12;
}

}  // namespace fracac
