#pragma once

#include <optional>
#include <vector>

#include "fracac/field.hpp"
#include "fracac/kernel.hpp"
#include "fracac/lattice.hpp"
#include "fracac/potential.hpp"

namespace fracac {

enum class Scheme { semi_implicit_spectral, explicit_flow, newton };

struct SolveConfig {
  double epsilon = 1.0;
  Scheme scheme = Scheme::semi_implicit_spectral;
  /// Time step; 0 selects 0.4 eps^s / max|W''| (explicit: 0.9 / stiffness bound).
  double step = 0.0;
  int max_iterations = 20000;
  double residual_tol = 1e-8;
  ScalarField seed_field;
  /// Keep u(-x) = -u(x) (removes the translation mode of odd problems).
  bool odd_symmetry = false;
  /// Residual certified on this region only (default: every node).
  std::optional<BallRegion> certify_region;
  /// Newton-CG takes over below this residual (scheme newton).
  double newton_switch = 1e-4;
};

struct SolveResult {
  ScalarField field;
  double residual_sup = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace;
  /// Every accepted iterate stayed in [-1, 1].
  bool range_preserved = true;
};

/// E_box(u) = E^Sob_box(u) + eps^{-s} h^n sum W(u).
double total_energy(const LatticeOperator& op, const Vector& u, const Potential& W, double epsilon);
/// L u + eps^{-s} W'(u).
Vector euler_lagrange(const LatticeOperator& op, const Vector& u, const Potential& W, double epsilon);

/// Steady state of the L^2 gradient flow of E_box with the seed's exterior model.
/// Throws InstabilityError after 10 consecutive energy increases.
SolveResult gradient_flow(const SolveConfig& config, const KernelSpec& spec, const Potential& W);

/// Odd increasing layer on [-box_radius, box_radius] with exterior -1 / +1,
/// unit-symbol kernel of order s and the quartic potential; the residual is
/// certified on the inner half of the box.
SolveResult solve_layer_1d(double s, double box_radius, double h, double tol);

/// |d/dtau E(u + tau xi) (central difference) - h^n <L u + eps^{-s} W'(u), xi>|
/// relative to the larger of the two.
double el_consistency(const ScalarField& u, const ScalarField& xi, const KernelSpec& spec, const Potential& W,
                      double epsilon = 1.0, double tau = 1e-5);

}  // namespace fracac
