#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace fracac {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Cached rule with n points (n >= 1).
const GaussRule& gauss_legendre(int n);

/// Integrate f over [a, b] with an n-point Gauss rule.
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Hurwitz zeta sum_{k>=0} (k + a)^{-s} for s > 1, a > 0.
double hurwitz_zeta(double s, double a);

/// Epstein zeta sum_{d in Z^n, d != 0} |d|^{-sigma}, analytically continued
/// in sigma (sigma != 0, n).
double epstein_zeta(int n, double sigma);

/// Surface measure of the unit sphere S^{n-1} (2 for n = 1).
double unit_sphere_area(int n);

/// Volume of the unit ball in R^n (n = 0 gives 1).
double unit_ball_volume(int n);

/// Worker count: FRACAC_THREADS if set, else hardware concurrency.
int thread_budget();

/// Static block partition of [0, count) over the worker budget. The body
/// receives [begin, end); outputs must be written per index for determinism.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

/// In-place n-dimensional FFT over a cube of side p (row-major, axis 0 fastest).
void fft_nd(std::vector<std::complex<double>>& data, int dim, int p, bool inverse);

/// Discrete convolution (W * f)(x) = sum_y W(x - y) f(y) over the nodes of a
/// cube lattice with `nodes` points per axis.
///
/// Periodic lattices wrap offsets (the weight callback receives the signed
/// offset in [-nodes/2, nodes/2) and must return the folded weight). Aperiodic
/// lattices are zero padded to 2*nodes so no wrap-around occurs.
class Convolver {
 public:
  using WeightFn = std::function<double(const std::array<int, 3>&)>;

  Convolver() = default;
  Convolver(int dim, int nodes, bool periodic, const WeightFn& weight);

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;

  /// Sum of all weights (the transform at zero frequency).
  double total_weight() const { return total_; }
  /// Real transform of the padded weight array, indexed like the padded lattice.
  const std::vector<double>& weight_transform() const { return transform_; }
  int padded_size() const { return padded_; }
  int dim() const { return dim_; }
  int nodes() const { return nodes_; }

  /// Solve (shift + multiplier(k)) g = f on the padded lattice, returning the
  /// box part. multiplier receives the padded multi-index.
  Eigen::VectorXd apply_padded_multiplier(const Eigen::VectorXd& f,
                                          const std::function<double(const std::array<int, 3>&)>& multiplier) const;

 private:
  int dim_ = 1;
  int nodes_ = 0;
  int padded_ = 0;
  bool periodic_ = true;
  double total_ = 0.0;
  std::vector<double> transform_;
};

/// Signed frequency index of position k on a periodic axis of length p.
inline int signed_frequency(int k, int p) { return k < (p + 1) / 2 ? k : k - p; }

}  // namespace fracac
