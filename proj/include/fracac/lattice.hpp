#pragma once

#include <array>

#include "fracac/field.hpp"
#include "fracac/kernel.hpp"
#include "fracac/numerics.hpp"

namespace fracac {

/// Lattice weight W_d for the nonzero offset d on a grid of spacing h, in
/// units where sum_d W_d (u(x) - u(x + d h)) approximates L_K u(x). Unfolded
/// (no periodic images).
double lattice_weight(const KernelSpec& spec, int n, double h, const std::array<int, 3>& d);

/// int_{[-1,1]^n} prod_a (1 - |v_a|) |d + v|^{-n-s} dv for d != 0, s in (0, 1):
/// the cell-to-cell integral of the bare kernel in lattice units.
double cell_pair_integral(int n, double s, const std::array<int, 3>& d);
/// Same integral with the kernel composed with a linear map, |A (d + v)|^{-n-s}.
double cell_pair_integral_mapped(int n, double s, const std::array<int, 3>& d, const Eigen::Matrix3d& A);

/// Discrete nonlocal operator on a grid.
///
/// With W the lattice weights and (T, S, Q) the exterior moments
/// int_ext K, int_ext K u_ext, int_ext K u_ext^2 seen from each node,
///   L u   = u (W*1 + T) - W*u - S,
///   E_Om  = h^n/4 [2 pair(Om, box) - pair(Om, Om)] + h^n/2 sum_Om (u^2 T - 2 u S + Q),
/// so h^n L u is exactly the gradient of E_box.
class LatticeOperator {
 public:
  /// tail_mask restricts the exterior moments to the marked nodes (others are
  /// left at zero); empty means every node.
  LatticeOperator(const Grid& g, const KernelSpec& spec, const Mask& tail_mask = {});

  const Grid& grid() const { return grid_; }
  const KernelSpec& spec() const { return spec_; }

  /// Folded weight for a signed offset (the periodic images are summed).
  double weight(const std::array<int, 3>& d) const;
  Vector convolve(const Vector& f) const { return conv_.apply(f); }

  /// W*1 over the box nodes.
  const Vector& row_sum() const { return row_sum_; }
  const Vector& tail_mass() const { return tail_mass_; }
  const Vector& tail_first() const { return tail_first_; }
  const Vector& tail_second() const { return tail_second_; }
  /// Diagonal of L: W*1 + T.
  Vector diagonal() const { return row_sum_ + tail_mass_; }

  Vector apply(const Vector& u) const;
  /// L with zero exterior data (the linear part acting on compactly supported test functions).
  Vector apply_homogeneous(const Vector& xi) const;

  /// sum_{x in A} sum_{y in B} W(x - y) (u(x) - u(y))^2; an empty B means the whole box.
  double pair_sum(const Vector& u, const Mask& A, const Mask& B = {}) const;
  double sobolev_energy(const Vector& u, const Mask& region) const;

  /// Eigenvalue of L on the Fourier mode with signed frequency index k (periodic grids).
  double symbol(const std::array<int, 3>& k) const;
  /// (shift + L)^{-1} f: exact on periodic grids, a zero-padded Fourier
  /// approximation without tails otherwise.
  Vector solve_shifted(const Vector& f, double shift) const;

 private:
  void build_tails(const Mask& tail_mask);

  Grid grid_;
  KernelSpec spec_;
  Convolver conv_;
  Vector row_sum_;
  Vector tail_mass_;
  Vector tail_first_;
  Vector tail_second_;
  Mask tail_mask_;
};

}  // namespace fracac
