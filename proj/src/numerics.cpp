#include "fracac/numerics.hpp"

#include <unsupported/Eigen/FFT>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

#include "fracac/errors.hpp"

namespace fracac {

namespace {

GaussRule build_gauss(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = rule.w[n - 1 - i] = w;
  }
  if (n == 1) {
    rule.x[0] = 0.0;
    rule.w[0] = 2.0;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  if (n < 1) throw ConfigError("Gauss rule needs at least one point");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss(n)).first;
  return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n) {
  const GaussRule& g = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += g.w[i] * f(mid + half * g.x[i]);
  return acc * half;
}

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0) || !(a > 0.0)) throw ConfigError("hurwitz_zeta needs s > 1 and a > 0");
  constexpr int M = 12;
  double acc = 0.0;
  for (int k = 0; k < M; ++k) acc += std::pow(k + a, -s);
  const double b = M + a;
  acc += std::pow(b, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(b, -s);
  // Euler-Maclaurin: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * b^{-s-2j+1}
  static const double bern[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0};
  double rising = s;       // s (s+1) ... (s + 2j - 2)
  double factorial = 2.0;  // (2j)!
  double power = std::pow(b, -s - 1.0);
  for (int j = 1; j <= 6; ++j) {
    acc += bern[j - 1] / factorial * rising * power;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    power /= b * b;
  }
  return acc;
}

double epstein_zeta(int n, double sigma) {
  if (n < 1 || n > 3) throw UnsupportedDimension("epstein_zeta supports n = 1, 2, 3");
  if (sigma == 0.0) return -1.0;
  if (sigma == static_cast<double>(n)) throw SingularityError("epstein_zeta pole at sigma = n");
  if (n == 1) return 2.0 * boost::math::zeta(sigma);
  // Ewald / theta-function splitting; both lattice sums decay like exp(-pi |d|^2).
  const double a1 = 0.5 * sigma, a2 = 0.5 * (n - sigma);
  constexpr int R = 5;
  double acc = 0.0;
  const int r3 = n == 3 ? R : 0;
  for (int i = -R; i <= R; ++i)
    for (int j = -R; j <= R; ++j)
      for (int k = -r3; k <= r3; ++k) {
        const double q = static_cast<double>(i * i + j * j + k * k);
        if (q == 0.0) continue;
        const double x = M_PI * q;
        acc += boost::math::tgamma(a1, x) * std::pow(x, -a1) + boost::math::tgamma(a2, x) * std::pow(x, -a2);
      }
  acc -= 2.0 / sigma + 2.0 / (n - sigma);
  return acc * std::pow(M_PI, a1) / boost::math::tgamma(a1);
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double unit_ball_volume(int n) {
  if (n == 0) return 1.0;
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

int thread_budget() {
  if (const char* env = std::getenv("FRACAC_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_budget()), count);
  if (workers <= 1 || count < 64) {
    if (count > 0) body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& t : pool) t.join();
}

void fft_nd(std::vector<std::complex<double>>& data, int dim, int p, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> line(p), out(p);
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(p);
  if (data.size() != total) throw GridMismatch("fft_nd buffer size mismatch");
  std::size_t stride = 1;
  for (int a = 0; a < dim; ++a) {
    const std::size_t block = stride * static_cast<std::size_t>(p);
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        const std::size_t start = base + off;
        for (int k = 0; k < p; ++k) line[k] = data[start + k * stride];
        if (inverse)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (int k = 0; k < p; ++k) data[start + k * stride] = out[k];
      }
    }
    stride = block;
  }
}

namespace {

std::size_t cube_size(int dim, int p) {
  std::size_t t = 1;
  for (int a = 0; a < dim; ++a) t *= static_cast<std::size_t>(p);
  return t;
}

std::array<int, 3> unravel(std::size_t lin, int dim, int p) {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    idx[a] = static_cast<int>(lin % p);
    lin /= p;
  }
  return idx;
}

}  // namespace

Convolver::Convolver(int dim, int nodes, bool periodic, const WeightFn& weight)
    : dim_(dim), nodes_(nodes), padded_(periodic ? nodes : 2 * nodes), periodic_(periodic) {
  const std::size_t total = cube_size(dim_, padded_);
  std::vector<std::complex<double>> buf(total);
  total_ = 0.0;
  for (std::size_t lin = 0; lin < total; ++lin) {
    const auto idx = unravel(lin, dim_, padded_);
    std::array<int, 3> d{0, 0, 0};
    bool skip = false;
    for (int a = 0; a < dim_; ++a) {
      d[a] = signed_frequency(idx[a], padded_);
      if (!periodic_ && std::abs(d[a]) >= nodes_) skip = true;
    }
    const double w = skip ? 0.0 : weight(d);
    buf[lin] = w;
    total_ += w;
  }
  fft_nd(buf, dim_, padded_, false);
  transform_.resize(total);
  for (std::size_t i = 0; i < total; ++i) transform_[i] = buf[i].real();
}

namespace {

void embed(const Eigen::VectorXd& f, std::vector<std::complex<double>>& buf, int dim, int nodes, int padded) {
  const std::size_t count = cube_size(dim, nodes);
  for (std::size_t lin = 0; lin < count; ++lin) {
    const auto idx = unravel(lin, dim, nodes);
    std::size_t pl = 0;
    for (int a = dim - 1; a >= 0; --a) pl = pl * padded + idx[a];
    buf[pl] = f[static_cast<Eigen::Index>(lin)];
  }
}

Eigen::VectorXd extract(const std::vector<std::complex<double>>& buf, int dim, int nodes, int padded) {
  const std::size_t count = cube_size(dim, nodes);
  Eigen::VectorXd out(static_cast<Eigen::Index>(count));
  for (std::size_t lin = 0; lin < count; ++lin) {
    const auto idx = unravel(lin, dim, nodes);
    std::size_t pl = 0;
    for (int a = dim - 1; a >= 0; --a) pl = pl * padded + idx[a];
    out[static_cast<Eigen::Index>(lin)] = buf[pl].real();
  }
  return out;
}

}  // namespace

Eigen::VectorXd Convolver::apply(const Eigen::VectorXd& f) const {
  if (static_cast<std::size_t>(f.size()) != cube_size(dim_, nodes_)) throw GridMismatch("convolution input size");
  std::vector<std::complex<double>> buf(cube_size(dim_, padded_));
  embed(f, buf, dim_, nodes_, padded_);
  fft_nd(buf, dim_, padded_, false);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= transform_[i];
  fft_nd(buf, dim_, padded_, true);
  return extract(buf, dim_, nodes_, padded_);
}

Eigen::VectorXd Convolver::apply_padded_multiplier(
    const Eigen::VectorXd& f, const std::function<double(const std::array<int, 3>&)>& multiplier) const {
  std::vector<std::complex<double>> buf(cube_size(dim_, padded_));
  embed(f, buf, dim_, nodes_, padded_);
  fft_nd(buf, dim_, padded_, false);
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= multiplier(unravel(i, dim_, padded_));
  fft_nd(buf, dim_, padded_, true);
  return extract(buf, dim_, nodes_, padded_);
}

}  // namespace fracac
