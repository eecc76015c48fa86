#pragma once

#include <functional>
#include <string>

namespace fracac {

enum class PotentialKind { quartic, peierls_nabarro, custom };

/// Double-well potential with wells at +-1 and the structural constants
/// (c0, nu0, nu1): -W'' >= nu0 on [0, c0], W'' >= nu0 on [1 - c0, 1] and
/// -W'(t) >= nu1 on [c0/2, 1 - c0], with the mirrored statements for t < 0.
struct Potential {
  PotentialKind kind = PotentialKind::quartic;
  std::function<double(double)> W;
  std::function<double(double)> dW;
  std::function<double(double)> ddW;
  double c0 = 0.0;
  double nu0 = 0.0;
  double nu1 = 0.0;
  /// max |W''| on [-1, 1].
  double curvature_bound = 0.0;

  /// 1/4 (1 - u^2)^2.
  static Potential quartic();
  /// (1 + cos(pi u)) / pi^2.
  static Potential peierls_nabarro();
  /// Audits the well structure (throws ConfigError on failure) and measures
  /// the constants on a fine sample.
  static Potential custom(std::function<double(double)> W, std::function<double(double)> dW,
                          std::function<double(double)> ddW);

  std::string name() const;
};

struct PotentialAudit {
  bool wells_vanish = false;
  bool positive_inside = false;
  bool wells_nondegenerate = false;
  bool single_interior_critical = false;
  double critical_point = 0.0;
  bool passed() const { return wells_vanish && positive_inside && wells_nondegenerate && single_interior_critical; }
};

/// W(+-1) = 0, W > 0 on (-1, 1), W''(+-1) > 0 and a unique interior critical
/// point t0 with W''(t0) < 0, checked on `samples` equispaced points.
PotentialAudit audit_potential(const Potential& W, int samples = 20001);

/// Checks the three inequalities behind (c0, nu0, nu1) on a fine sample.
bool structural_constants_hold(const Potential& W, int samples = 20001);

}  // namespace fracac
