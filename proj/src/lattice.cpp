#include "fracac/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "fracac/exterior.hpp"

namespace fracac {

namespace {

constexpr int kDuffyRadial = 20;
constexpr int kDuffyFace = 12;
constexpr int kTensorPoints = 8;

int far_offset(int n) { return n == 3 ? 8 : 1 << 20; }

double tent(const std::array<double, 3>& v, int n) {
  double t = 1.0;
  for (int a = 0; a < n; ++a) t *= 1.0 - std::abs(v[a]);
  return t;
}

// Orthant pieces of [-1,1]^n that have the singular point v* = -d as a vertex
// are integrated on n pyramids with apex v*; mu = nu^{1/(1-s)} absorbs the
// mu^{-s} singularity left after dividing the tent factor by mu.
// A (optional) composes the kernel with a linear map: |A z|^{-n-s}.
double duffy_piece(int n, double s, const std::array<double, 3>& vstar, const std::array<int, 3>& dir,
                   const Eigen::Matrix3d* A = nullptr) {
  const GaussRule& gr = gauss_legendre(kDuffyRadial);
  const GaussRule& gf = gauss_legendre(kDuffyFace);
  const double expo = 1.0 / (1.0 - s);
  double total = 0.0;
  for (int face = 0; face < n; ++face) {
    const int free_dims = n - 1;
    const int face_pts = free_dims == 0 ? 1 : free_dims == 1 ? kDuffyFace : kDuffyFace * kDuffyFace;
    for (int f = 0; f < face_pts; ++f) {
      std::array<double, 3> p{0, 0, 0};
      double wface = 1.0;
      int slot = f;
      for (int a = 0; a < n; ++a) {
        if (a == face) {
          p[a] = 1.0;
          continue;
        }
        const int q = slot % kDuffyFace;
        slot /= kDuffyFace;
        p[a] = 0.5 * (1.0 + gf.x[q]);
        wface *= 0.5 * gf.w[q];
      }
      double pn = 0.0;
      if (A) {
        Point z = Point::Zero();
        for (int a = 0; a < n; ++a) z[a] = dir[a] * p[a];
        pn = (*A * z).squaredNorm();
      } else {
        for (int a = 0; a < n; ++a) pn += p[a] * p[a];
      }
      const double radial_weight = std::pow(pn, -0.5 * (n + s));
      double inner = 0.0;
      for (int k = 0; k < kDuffyRadial; ++k) {
        const double nu = 0.5 * (1.0 + gr.x[k]);
        const double mu = std::pow(nu, expo);
        std::array<double, 3> v{0, 0, 0};
        for (int a = 0; a < n; ++a) v[a] = vstar[a] + dir[a] * mu * p[a];
        inner += 0.5 * gr.w[k] * tent(v, n) / mu;
      }
      total += wface * radial_weight * inner * expo;
    }
  }
  return total;
}

double tensor_piece(int n, double s, const std::array<int, 3>& d, const std::array<double, 3>& lo,
                    const Eigen::Matrix3d* A = nullptr) {
  const GaussRule& g = gauss_legendre(kTensorPoints);
  int count = 1;
  for (int a = 0; a < n; ++a) count *= kTensorPoints;
  double total = 0.0;
  for (int c = 0; c < count; ++c) {
    std::array<double, 3> v{0, 0, 0};
    double w = 1.0;
    int slot = c;
    Point z = Point::Zero();
    for (int a = 0; a < n; ++a) {
      const int q = slot % kTensorPoints;
      slot /= kTensorPoints;
      v[a] = lo[a] + 0.5 * (1.0 + g.x[q]);
      w *= 0.5 * g.w[q];
      z[a] = d[a] + v[a];
    }
    const double r2 = A ? (*A * z).squaredNorm() : z.squaredNorm();
    total += w * tent(v, n) * std::pow(r2, -0.5 * (n + s));
  }
  return total;
}

double orthant_sum(int n, double s, const std::array<int, 3>& d, const Eigen::Matrix3d* A) {
  double total = 0.0;
  for (int orth = 0; orth < (1 << n); ++orth) {
    std::array<double, 3> lo{0, 0, 0}, vstar{0, 0, 0};
    std::array<int, 3> dir{0, 0, 0};
    bool singular = true;
    for (int a = 0; a < n; ++a) {
      lo[a] = (orth >> a) & 1 ? 0.0 : -1.0;
      vstar[a] = -d[a];
      if (vstar[a] == lo[a])
        dir[a] = 1;
      else if (vstar[a] == lo[a] + 1.0)
        dir[a] = -1;
      else
        singular = false;
    }
    total += singular ? duffy_piece(n, s, vstar, dir, A) : tensor_piece(n, s, d, lo, A);
  }
  return total;
}

}  // namespace

double cell_pair_integral(int n, double s, const std::array<int, 3>& d) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("cell-average weights need s in (0, 1)");
  int dinf = 0;
  double r2 = 0.0;
  for (int a = 0; a < n; ++a) {
    dinf = std::max(dinf, std::abs(d[a]));
    r2 += static_cast<double>(d[a]) * d[a];
  }
  if (dinf == 0) throw SingularityError("cell pair integral at zero offset");
  if (n == 1) {
    const double x = dinf;
    return (2.0 * std::pow(x, 1.0 - s) - std::pow(x - 1.0, 1.0 - s) - std::pow(x + 1.0, 1.0 - s)) / (s * (1.0 - s));
  }
  if (dinf > far_offset(n)) {
    // tent average of a smooth function: f(d) + (1/12) Laplacian f(d)
    return std::pow(r2, -0.5 * (n + s)) + (n + s) * (s + 2.0) / 12.0 * std::pow(r2, -0.5 * (n + s + 2.0));
  }
  return orthant_sum(n, s, d, nullptr);
}

double cell_pair_integral_mapped(int n, double s, const std::array<int, 3>& d, const Eigen::Matrix3d& A) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("cell-average weights need s in (0, 1)");
  if (d[0] == 0 && d[1] == 0 && d[2] == 0) throw SingularityError("cell pair integral at zero offset");
  return orthant_sum(n, s, d, &A);
}

namespace {

struct ZetaKey {
  int n;
  double s;
  bool operator<(const ZetaKey& o) const { return n != o.n ? n < o.n : s < o.s; }
};

// -Z_n(n + s - 2) / (2n): nearest-neighbour correction in lattice units.
double shell_correction(int n, double s) {
  static std::mutex mu;
  static std::map<ZetaKey, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  const ZetaKey key{n, s};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double v = -epstein_zeta(n, n + s - 2.0) / (2.0 * n);
  cache.emplace(key, v);
  return v;
}

}  // namespace

double lattice_weight(const KernelSpec& spec, int n, double h, const std::array<int, 3>& d) {
  int l1 = 0;
  double r2 = 0.0;
  for (int a = 0; a < n; ++a) {
    l1 += std::abs(d[a]);
    r2 += static_cast<double>(d[a]) * d[a];
  }
  if (l1 == 0) return 0.0;
  if (spec.kind == KernelKind::classical) return l1 == 1 ? 1.0 / (h * h) : 0.0;
  const double s = spec.s;
  const double r = std::sqrt(r2);
  const double scale = spec.prefactor(n) * std::pow(h, -s);
  if (spec.rule == WeightRule::cell_average) return scale * spec.rho(r * h) * cell_pair_integral(n, s, d);
  double w = scale * spec.rho(r * h) * std::pow(r, -n - s);
  if (l1 == 1) w += scale * spec.rho(h) * shell_correction(n, s);
  return w;
}

namespace {

double folded_weight(const KernelSpec& spec, const Grid& g, const std::array<int, 3>& d) {
  const int n = g.dim, N = g.nodes_per_axis;
  if (spec.kind == KernelKind::classical) {
    int l1 = 0;
    for (int a = 0; a < n; ++a) l1 += std::abs(d[a]);
    return l1 == 1 ? 1.0 / (g.h * g.h) : 0.0;
  }
  const double s = spec.s;
  const double scale = spec.prefactor(n) * std::pow(g.h, -s);
  if (n == 1) {
    constexpr int M = 2;
    double w = 0.0;
    for (int m = -M; m <= M; ++m) w += lattice_weight(spec, 1, g.h, {d[0] + m * N, 0, 0});
    const double j = static_cast<double>(d[0]) / N;
    const double rho = spec.rho((M + 1) * N * g.h);
    w += scale * rho * std::pow(static_cast<double>(N), -1.0 - s) *
         (hurwitz_zeta(1.0 + s, M + 1 + j) + hurwitz_zeta(1.0 + s, M + 1 - j));
    return w;
  }
  double w = 0.0;
  const int m2 = n == 3 ? 1 : 0;
  for (int m0 = -1; m0 <= 1; ++m0)
    for (int m1 = -1; m1 <= 1; ++m1)
      for (int mz = -m2; mz <= m2; ++mz) {
        std::array<int, 3> e{d[0] + m0 * N, d[1] + m1 * N, n == 3 ? d[2] + mz * N : 0};
        w += lattice_weight(spec, n, g.h, e);
      }
  // images beyond the first ring: uniform density N^{-n} outside the
  // equal-volume ball of the cube of half-width 1.5 N
  const double r_eq = 1.5 * N * std::pow(std::pow(2.0, n) / unit_ball_volume(n), 1.0 / n);
  w += scale * spec.rho(r_eq * g.h) * std::pow(static_cast<double>(N), -n) * unit_sphere_area(n) *
       std::pow(r_eq, -s) / s;
  return w;
}

std::array<int, 3> canonical(std::array<int, 3> d, int n) {
  for (int a = 0; a < n; ++a) d[a] = std::abs(d[a]);
  std::sort(d.begin(), d.begin() + n);
  return d;
}

}  // namespace

double LatticeOperator::weight(const std::array<int, 3>& d) const {
  // periodic copies of the self offset carry weight but never contribute to L
  if (grid_.periodic()) return folded_weight(spec_, grid_, d);
  return lattice_weight(spec_, grid_.dim, grid_.h, d);
}

LatticeOperator::LatticeOperator(const Grid& g, const KernelSpec& spec, const Mask& tail_mask)
    : grid_(g), spec_(spec) {
  if (spec_.rule == WeightRule::cell_average && spec_.kind != KernelKind::classical &&
      !(spec_.s > 0.0 && spec_.s < 1.0))
    throw ConfigError("cell-average weights need s in (0, 1)");
  if (grid_.periodic() && grid_.nodes_per_axis < 3) throw ConfigError("periodic lattice needs at least 3 nodes per axis");
  const int n = grid_.dim;
  std::map<std::array<int, 3>, double> cache;
  const bool symmetric = spec_.kind != KernelKind::classical;
  auto wfn = [&](const std::array<int, 3>& d) {
    if (!symmetric) return weight(d);
    const auto key = canonical(d, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double v = weight(key);
    cache.emplace(key, v);
    return v;
  };
  conv_ = Convolver(n, grid_.nodes_per_axis, grid_.periodic(), wfn);
  row_sum_ = conv_.apply(Vector::Ones(static_cast<Eigen::Index>(grid_.node_count())));
  build_tails(tail_mask);
}

void LatticeOperator::build_tails(const Mask& tail_mask) {
  const std::size_t count = grid_.node_count();
  tail_mass_ = Vector::Zero(static_cast<Eigen::Index>(count));
  tail_first_ = tail_mass_;
  tail_second_ = tail_mass_;
  tail_mask_ = tail_mask;
  if (!tail_mask_.empty() && tail_mask_.size() != count) throw GridMismatch("tail mask size");
  if (grid_.periodic()) return;
  const int n = grid_.dim;
  const int N = grid_.nodes_per_axis;
  const double h = grid_.h, L = grid_.box_radius;
  const BoundaryModel& bm = grid_.boundary;
  const bool classical = spec_.kind == KernelKind::classical;
  const double shell = classical ? 1.0 / (h * h)
                                 : spec_.rule == WeightRule::corrected_point
                                       ? spec_.prefactor(n) * std::pow(h, -spec_.s) * spec_.rho(h) *
                                             shell_correction(n, spec_.s)
                                       : 0.0;
  RadialLaw law;
  if (!classical) law = power_law(n, spec_.s, spec_.prefactor(n), spec_.profile);
  const bool closed_1d = !classical && n == 1 && spec_.rule == WeightRule::cell_average && spec_.pure_power() &&
                         bm.kind == BoundaryKind::exterior_constant;
  const GaussRule& g3 = gauss_legendre(3);

  parallel_for(count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!tail_mask_.empty() && !tail_mask_[i]) continue;
      const Point x = grid_.position(i);
      const auto idx = grid_.multi_index(i);
      ExteriorMoments m;
      if (classical) {
        // only ghost links
      } else if (closed_1d) {
        const double s = spec_.s, pref = spec_.prefactor(1);
        const double a = x[0] - 0.5 * h, b = x[0] + 0.5 * h;
        const double c = pref / (s * (1.0 - s) * h);
        const double right = c * (std::pow(L - a, 1.0 - s) - std::pow(std::max(L - b, 0.0), 1.0 - s));
        const double left = c * (std::pow(b + L, 1.0 - s) - std::pow(std::max(a + L, 0.0), 1.0 - s));
        const double vr = bm.exterior_value(Point(L + h, 0, 0)), vl = bm.exterior_value(Point(-L - h, 0, 0));
        m.mass = right + left;
        m.first = vr * right + vl * left;
        m.second = vr * vr * right + vl * vl * left;
      } else if (spec_.rule == WeightRule::cell_average) {
        double gap = kInf;
        for (int a = 0; a < n; ++a) gap = std::min(gap, L - std::abs(x[a]));
        if (gap < 3.0 * h) {
          int pts = 1;
          for (int a = 0; a < n; ++a) pts *= 3;
          for (int p = 0; p < pts; ++p) {
            Point y = x;
            double w = 1.0;
            int slot = p;
            for (int a = 0; a < n; ++a) {
              const int q = slot % 3;
              slot /= 3;
              y[a] += 0.5 * h * g3.x[q];
              w *= 0.5 * g3.w[q];
            }
            ExteriorMoments e = exterior_moments(grid_, y, law);
            e *= w;
            m += e;
          }
        } else {
          m = exterior_moments(grid_, x, law);
        }
      } else {
        m = exterior_moments(grid_, x, law);
      }
      if (shell != 0.0) {
        for (int a = 0; a < n; ++a)
          for (int sg = -1; sg <= 1; sg += 2) {
            const int j = idx[a] + sg;
            if (j >= 0 && j < N) continue;
            Point z = x;
            z[a] += sg * h;
            const double v = bm.exterior_value(z);
            m.mass += shell;
            m.first += shell * v;
            m.second += shell * v * v;
          }
      }
      const auto e = static_cast<Eigen::Index>(i);
      tail_mass_[e] = m.mass;
      tail_first_[e] = m.first;
      tail_second_[e] = m.second;
    }
  });
}

Vector LatticeOperator::apply(const Vector& u) const {
  if (static_cast<std::size_t>(u.size()) != grid_.node_count()) throw GridMismatch("operator input size");
  return (row_sum_ + tail_mass_).cwiseProduct(u) - conv_.apply(u) - tail_first_;
}

Vector LatticeOperator::apply_homogeneous(const Vector& xi) const {
  if (static_cast<std::size_t>(xi.size()) != grid_.node_count()) throw GridMismatch("operator input size");
  return (row_sum_ + tail_mass_).cwiseProduct(xi) - conv_.apply(xi);
}

double LatticeOperator::pair_sum(const Vector& u, const Mask& A, const Mask& B) const {
  const std::size_t count = grid_.node_count();
  if (static_cast<std::size_t>(u.size()) != count || A.size() != count || (!B.empty() && B.size() != count))
    throw GridMismatch("pair_sum input size");
  Vector wb, wub, wu2b;
  const Vector u2 = u.cwiseProduct(u);
  if (B.empty()) {
    wb = row_sum_;
    wub = conv_.apply(u);
    wu2b = conv_.apply(u2);
  } else {
    Vector ind = Vector::Zero(u.size());
    for (std::size_t i = 0; i < count; ++i)
      if (B[i]) ind[static_cast<Eigen::Index>(i)] = 1.0;
    wb = conv_.apply(ind);
    wub = conv_.apply(u.cwiseProduct(ind));
    wu2b = conv_.apply(u2.cwiseProduct(ind));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (!A[i]) continue;
    const auto e = static_cast<Eigen::Index>(i);
    acc += u2[e] * wb[e] - 2.0 * u[e] * wub[e] + wu2b[e];
  }
  return acc;
}

double LatticeOperator::sobolev_energy(const Vector& u, const Mask& region) const {
  const std::size_t count = grid_.node_count();
  if (region.size() != count) throw GridMismatch("region mask size");
  if (!tail_mask_.empty())
    for (std::size_t i = 0; i < count; ++i)
      if (region[i] && !tail_mask_[i]) throw PreconditionError("region extends beyond the nodes with exterior tails");
  const double hn = grid_.cell_volume();
  const bool whole = std::all_of(region.begin(), region.end(), [](char c) { return c != 0; });
  const double full = pair_sum(u, region);
  const double inner = whole ? full : pair_sum(u, region, region);
  double tails = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    if (!region[i]) continue;
    const auto e = static_cast<Eigen::Index>(i);
    tails += u[e] * u[e] * tail_mass_[e] - 2.0 * u[e] * tail_first_[e] + tail_second_[e];
  }
  return 0.25 * hn * (2.0 * full - inner) + 0.5 * hn * tails;
}

double LatticeOperator::symbol(const std::array<int, 3>& k) const {
  if (!grid_.periodic()) throw ConfigError("symbol needs a periodic grid");
  const int P = conv_.padded_size();
  std::size_t lin = 0;
  for (int a = grid_.dim - 1; a >= 0; --a) lin = lin * P + static_cast<std::size_t>(((k[a] % P) + P) % P);
  return conv_.total_weight() - conv_.weight_transform()[lin];
}

Vector LatticeOperator::solve_shifted(const Vector& f, double shift) const {
  const int P = conv_.padded_size();
  const int n = grid_.dim;
  const double total = conv_.total_weight();
  const auto& tr = conv_.weight_transform();
  return conv_.apply_padded_multiplier(f, [&](const std::array<int, 3>& idx) {
    std::size_t lin = 0;
    for (int a = n - 1; a >= 0; --a) lin = lin * P + static_cast<std::size_t>(idx[a]);
    return 1.0 / (shift + total - tr[lin]);
  });
}

}  // namespace fracac
