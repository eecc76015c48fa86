#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracac/errors.hpp"

namespace fracac {

/// Points live in R^3; components beyond the grid dimension are zero.
using Point = Eigen::Vector3d;
using Vector = Eigen::VectorXd;
using Mask = std::vector<char>;

enum class BoundaryKind { periodic, exterior_constant, exterior_field };

/// How a field is continued outside the computational box.
///
/// exterior_constant: u(z) = plus where direction.z > 0 and minus elsewhere
/// (plus == minus gives a constant exterior). exterior_field evaluates an
/// arbitrary bounded function. Periodic grids have no exterior.
struct BoundaryModel {
  BoundaryKind kind = BoundaryKind::periodic;
  double plus = 1.0;
  double minus = -1.0;
  Point direction = Point::UnitX();
  std::function<double(const Point&)> field;

  static BoundaryModel periodic();
  static BoundaryModel constant(double value);
  static BoundaryModel sided(double plus, double minus, const Point& direction = Point::UnitX());
  static BoundaryModel from_function(std::function<double(const Point&)> f);

  bool has_exterior() const { return kind != BoundaryKind::periodic; }
  double exterior_value(const Point& z) const;
  /// Token used in the field serialization header (no whitespace).
  std::string token() const;
  static BoundaryModel parse(const std::string& token);
};

/// Uniform tensor grid on [-box_radius, box_radius]^n.
///
/// Periodic grids place nodes at -box_radius + i*h. Grids with an exterior
/// model are cell centred: node i sits at the centre of the cell
/// [-box_radius + i*h, -box_radius + (i+1)*h], so the cells tile the box and
/// the exterior is exactly the complement of the box.
struct Grid {
  int dim = 1;
  double h = 1.0;
  double box_radius = 1.0;
  int nodes_per_axis = 2;
  BoundaryModel boundary;

  std::size_t node_count() const;
  bool periodic() const { return boundary.kind == BoundaryKind::periodic; }
  double coordinate(int i) const;
  Point position(std::size_t linear) const;
  std::array<int, 3> multi_index(std::size_t linear) const;
  std::size_t linear_index(const std::array<int, 3>& idx) const;
  double cell_volume() const;
  bool inside_box(const Point& p) const;
  /// Same node set and spacing (boundary models may differ).
  bool same_lattice(const Grid& other) const;
};

Grid make_grid(int n, double box_radius, double h, BoundaryModel boundary);

struct ScalarField {
  Grid grid;
  Vector values;
  std::optional<std::pair<double, double>> range_hint;

  ScalarField() = default;
  ScalarField(Grid g, Vector v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != grid.node_count())
      throw ConfigError("field size does not match grid node count");
  }

  static ScalarField constant(const Grid& g, double c);
  static ScalarField from_function(const Grid& g, const std::function<double(const Point&)>& f);

  /// Multilinear interpolation of the node values; the exterior model supplies
  /// values outside the box and at the ghost nodes one cell beyond it.
  double sample(const Point& p) const;
  /// Value at a lattice index that may lie outside [0, N) (wrapped or exterior).
  double at_index(const std::array<int, 3>& idx) const;
};

struct IndicatorSet {
  Grid grid;
  Mask membership;

  /// chi_E - chi_{E^c} as a field with values in {-1, +1}.
  ScalarField signed_field() const;
  /// chi_E as a field with values in {0, 1}.
  ScalarField characteristic() const;
  std::size_t count() const;
};

struct BallRegion {
  Point center = Point::Zero();
  double radius = 1.0;
  bool contains(const Point& p) const { return (p - center).norm() <= radius; }
};

Mask region_mask(const Grid& g, const BallRegion& region);
/// Throws OutOfDomain when the region does not fit inside the box.
void require_region_inside(const Grid& g, const BallRegion& region, double margin = 0.0);

ScalarField rescale_blowdown(const ScalarField& u, double R, const Grid& target);
/// Blow-down onto a copy of u's own lattice.
ScalarField rescale_blowdown(const ScalarField& u, double R);

double l1_distance(const ScalarField& f, const ScalarField& g, const BallRegion& region);

/// Central-difference gradient; boundary nodes use exterior ghost values.
std::vector<Point> central_gradient(const ScalarField& u);
double gradient_l1_norm(const ScalarField& u, const BallRegion& region);

IndicatorSet level_set(const ScalarField& u, double c);
IndicatorSet superlevel_from_mask(const Grid& g, Mask m);

/// Hausdorff distance between the node sets A and B inside region;
/// +infinity when either is empty there.
double hausdorff_distance(const IndicatorSet& A, const IndicatorSet& B, const BallRegion& region);

/// u(x) = p(direction . x) for a 1D profile p (which uses its own exterior model).
ScalarField embed_profile(const ScalarField& profile, const Point& direction, const Grid& grid);

/// Field serialization: header `n h box_radius boundary_model` then one
/// `x1 .. xn value` row per node.
void write_field(const ScalarField& u, const std::string& path);
ScalarField read_field(const std::string& path);
std::string field_to_string(const ScalarField& u);
ScalarField field_from_string(const std::string& text);

}  // namespace fracac
