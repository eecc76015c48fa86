#include "fracac/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace fracac {

namespace {

int wrap(int i, int n) {
  int r = i % n;
  return r < 0 ? r + n : r;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// BoundaryModel

BoundaryModel BoundaryModel::periodic() { return BoundaryModel{}; }

BoundaryModel BoundaryModel::constant(double value) {
  BoundaryModel m;
  m.kind = BoundaryKind::exterior_constant;
  m.plus = m.minus = value;
  return m;
}

BoundaryModel BoundaryModel::sided(double plus, double minus, const Point& direction) {
  BoundaryModel m;
  m.kind = BoundaryKind::exterior_constant;
  m.plus = plus;
  m.minus = minus;
  if (direction.norm() == 0.0) throw ConfigError("exterior direction must be nonzero");
  m.direction = direction.normalized();
  return m;
}

BoundaryModel BoundaryModel::from_function(std::function<double(const Point&)> f) {
  BoundaryModel m;
  m.kind = BoundaryKind::exterior_field;
  m.field = std::move(f);
  return m;
}

double BoundaryModel::exterior_value(const Point& z) const {
  switch (kind) {
    case BoundaryKind::periodic:
      throw ConfigError("periodic grid has no exterior model");
    case BoundaryKind::exterior_constant:
      return direction.dot(z) > 0.0 ? plus : minus;
    case BoundaryKind::exterior_field:
      if (!field) throw OutOfDomain("exterior_field model has no evaluator attached");
      return field(z);
  }
  return 0.0;
}

std::string BoundaryModel::token() const {
  switch (kind) {
    case BoundaryKind::periodic:
      return "periodic";
    case BoundaryKind::exterior_constant:
      return "exterior_constant(" + format_double(plus) + "," + format_double(minus) + ";" +
             format_double(direction.x()) + "," + format_double(direction.y()) + "," +
             format_double(direction.z()) + ")";
    case BoundaryKind::exterior_field:
      return "exterior_field";
  }
  return "";
}

BoundaryModel BoundaryModel::parse(const std::string& token) {
  if (token == "periodic") return periodic();
  if (token == "exterior_field") {
    BoundaryModel m;
    m.kind = BoundaryKind::exterior_field;
    return m;
  }
  const std::string prefix = "exterior_constant(";
  if (token.rfind(prefix, 0) == 0 && token.back() == ')') {
    std::string body = token.substr(prefix.size(), token.size() - prefix.size() - 1);
    std::replace(body.begin(), body.end(), ',', ' ');
    std::replace(body.begin(), body.end(), ';', ' ');
    std::istringstream is(body);
    double plus = 0, minus = 0;
    Point d = Point::UnitX();
    if (!(is >> plus >> minus)) throw ConfigError("malformed boundary token: " + token);
    double a = 0, b = 0, c = 0;
    if (is >> a >> b >> c) d = Point(a, b, c);
    return sided(plus, minus, d);
  }
  throw ConfigError("unknown boundary model: " + token);
}

// ---------------------------------------------------------------------------
// Grid

Grid make_grid(int n, double box_radius, double h, BoundaryModel boundary) {
  if (n < 1 || n > 3) throw UnsupportedDimension("dimension must be 1, 2 or 3 (got " + std::to_string(n) + ")");
  if (!(h > 0.0) || !(box_radius > 0.0)) throw ConfigError("h and box_radius must be positive");
  const double ratio = box_radius / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("box_radius / h must be an integer (got " + format_double(ratio) + ")");
  Grid g;
  g.dim = n;
  g.h = h;
  g.box_radius = box_radius;
  g.nodes_per_axis = 2 * static_cast<int>(rounded);
  g.boundary = std::move(boundary);
  return g;
}

std::size_t Grid::node_count() const {
  std::size_t c = 1;
  for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(nodes_per_axis);
  return c;
}

double Grid::coordinate(int i) const {
  return periodic() ? -box_radius + i * h : -box_radius + (i + 0.5) * h;
}

std::array<int, 3> Grid::multi_index(std::size_t linear) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    idx[a] = static_cast<int>(linear % nodes_per_axis);
    linear /= nodes_per_axis;
  }
  return idx;
}

std::size_t Grid::linear_index(const std::array<int, 3>& idx) const {
  std::size_t lin = 0;
  for (int a = dim - 1; a >= 0; --a) lin = lin * nodes_per_axis + idx[a];
  return lin;
}

Point Grid::position(std::size_t linear) const {
  const auto idx = multi_index(linear);
  Point p = Point::Zero();
  for (int a = 0; a < dim; ++a) p[a] = coordinate(idx[a]);
  return p;
}

double Grid::cell_volume() const { return std::pow(h, dim); }

bool Grid::inside_box(const Point& p) const {
  for (int a = 0; a < dim; ++a)
    if (std::abs(p[a]) > box_radius) return false;
  return true;
}

bool Grid::same_lattice(const Grid& o) const {
  return dim == o.dim && nodes_per_axis == o.nodes_per_axis && std::abs(h - o.h) <= 1e-12 * h &&
         periodic() == o.periodic();
}

Mask region_mask(const Grid& g, const BallRegion& region) {
  Mask m(g.node_count(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = region.contains(g.position(i)) ? 1 : 0;
  return m;
}

void require_region_inside(const Grid& g, const BallRegion& region, double margin) {
  if (g.periodic()) return;
  for (int a = 0; a < g.dim; ++a)
    if (std::abs(region.center[a]) + region.radius > g.box_radius - margin + 1e-12)
      throw OutOfDomain("region of radius " + format_double(region.radius) + " does not fit inside the box");
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField ScalarField::constant(const Grid& g, double c) {
  return ScalarField(g, Vector::Constant(static_cast<Eigen::Index>(g.node_count()), c));
}

ScalarField ScalarField::from_function(const Grid& g, const std::function<double(const Point&)>& f) {
  Vector v(static_cast<Eigen::Index>(g.node_count()));
  for (std::size_t i = 0; i < g.node_count(); ++i) v[static_cast<Eigen::Index>(i)] = f(g.position(i));
  return ScalarField(g, std::move(v));
}

double ScalarField::at_index(const std::array<int, 3>& idx) const {
  const int N = grid.nodes_per_axis;
  std::array<int, 3> j = idx;
  bool outside = false;
  for (int a = 0; a < grid.dim; ++a) {
    if (grid.periodic()) {
      j[a] = wrap(idx[a], N);
    } else if (idx[a] < 0 || idx[a] >= N) {
      outside = true;
    }
  }
  if (!outside) return values[static_cast<Eigen::Index>(grid.linear_index(j))];
  Point p = Point::Zero();
  for (int a = 0; a < grid.dim; ++a) p[a] = grid.coordinate(idx[a]);
  return grid.boundary.exterior_value(p);
}

double ScalarField::sample(const Point& p) const {
  const int n = grid.dim;
  if (!grid.periodic() && !grid.inside_box(p)) return grid.boundary.exterior_value(p);
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0, 0, 0};
  const double shift = grid.periodic() ? 0.0 : 0.5;
  for (int a = 0; a < n; ++a) {
    double q = (p[a] + grid.box_radius) / grid.h - shift;
    const double qr = std::round(q);
    if (std::abs(q - qr) < 1e-10) q = qr;
    const double fl = std::floor(q);
    base[a] = static_cast<int>(fl);
    frac[a] = q - fl;
  }
  double acc = 0.0;
  const int corners = 1 << n;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::array<int, 3> idx = base;
    for (int a = 0; a < n; ++a) {
      if (c & (1 << a)) {
        w *= frac[a];
        idx[a] += 1;
      } else {
        w *= 1.0 - frac[a];
      }
    }
    if (w == 0.0) continue;
    acc += w * at_index(idx);
  }
  return acc;
}

ScalarField IndicatorSet::signed_field() const {
  Vector v(static_cast<Eigen::Index>(membership.size()));
  for (std::size_t i = 0; i < membership.size(); ++i) v[static_cast<Eigen::Index>(i)] = membership[i] ? 1.0 : -1.0;
  ScalarField f(grid, std::move(v));
  f.range_hint = std::make_pair(-1.0, 1.0);
  return f;
}

ScalarField IndicatorSet::characteristic() const {
  Vector v(static_cast<Eigen::Index>(membership.size()));
  for (std::size_t i = 0; i < membership.size(); ++i) v[static_cast<Eigen::Index>(i)] = membership[i] ? 1.0 : 0.0;
  Grid g = grid;
  // chi_E outside the box follows the signed exterior mapped to {0, 1}.
  if (grid.boundary.has_exterior()) {
    const BoundaryModel b = grid.boundary;
    g.boundary = BoundaryModel::from_function([b](const Point& z) { return b.exterior_value(z) > 0.0 ? 1.0 : 0.0; });
    if (b.kind == BoundaryKind::exterior_constant)
      g.boundary = BoundaryModel::sided(b.plus > 0 ? 1.0 : 0.0, b.minus > 0 ? 1.0 : 0.0, b.direction);
  }
  return ScalarField(g, std::move(v));
}

std::size_t IndicatorSet::count() const {
  return static_cast<std::size_t>(std::count(membership.begin(), membership.end(), 1));
}

// ---------------------------------------------------------------------------
// Operations

ScalarField rescale_blowdown(const ScalarField& u, double R, const Grid& target) {
  if (!(R > 0.0)) throw ConfigError("blow-down factor must be positive");
  if (target.dim != u.grid.dim) throw GridMismatch("blow-down target has a different dimension");
  if (R == 1.0 && target.same_lattice(u.grid)) {
    ScalarField v = u;
    v.grid.boundary = target.boundary.kind == BoundaryKind::periodic && u.grid.periodic() ? u.grid.boundary
                                                                                            : u.grid.boundary;
    return v;
  }
  Grid g = target;
  if (u.grid.boundary.has_exterior()) {
    const BoundaryModel b = u.grid.boundary;
    if (b.kind == BoundaryKind::exterior_constant) {
      g.boundary = b;  // sided data is 0-homogeneous
    } else {
      g.boundary = BoundaryModel::from_function([b, R](const Point& z) { return b.exterior_value(R * z); });
    }
  } else if (!target.periodic()) {
    const ScalarField copy = u;
    g.boundary = BoundaryModel::from_function([copy, R](const Point& z) { return copy.sample(R * z); });
  }
  Vector v(static_cast<Eigen::Index>(g.node_count()));
  for (std::size_t i = 0; i < g.node_count(); ++i) v[static_cast<Eigen::Index>(i)] = u.sample(R * g.position(i));
  ScalarField out(g, std::move(v));
  out.range_hint = u.range_hint;
  return out;
}

ScalarField rescale_blowdown(const ScalarField& u, double R) { return rescale_blowdown(u, R, u.grid); }

double l1_distance(const ScalarField& f, const ScalarField& g, const BallRegion& region) {
  if (!f.grid.same_lattice(g.grid)) throw GridMismatch("l1_distance requires fields on the same grid");
  const Mask m = region_mask(f.grid, region);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) acc += std::abs(f.values[static_cast<Eigen::Index>(i)] - g.values[static_cast<Eigen::Index>(i)]);
  return acc * f.grid.cell_volume();
}

std::vector<Point> central_gradient(const ScalarField& u) {
  const Grid& g = u.grid;
  std::vector<Point> grad(g.node_count(), Point::Zero());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto idx = g.multi_index(i);
    for (int a = 0; a < g.dim; ++a) {
      auto ip = idx, im = idx;
      ip[a] += 1;
      im[a] -= 1;
      grad[i][a] = (u.at_index(ip) - u.at_index(im)) / (2.0 * g.h);
    }
  }
  return grad;
}

double gradient_l1_norm(const ScalarField& u, const BallRegion& region) {
  require_region_inside(u.grid, region, u.grid.h);
  const auto grad = central_gradient(u);
  const Mask m = region_mask(u.grid, region);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) acc += grad[i].norm();
  return acc * u.grid.cell_volume();
}

IndicatorSet level_set(const ScalarField& u, double c) {
  IndicatorSet s;
  s.grid = u.grid;
  s.membership.resize(u.grid.node_count());
  for (std::size_t i = 0; i < s.membership.size(); ++i)
    s.membership[i] = u.values[static_cast<Eigen::Index>(i)] >= c ? 1 : 0;
  if (u.grid.boundary.has_exterior()) {
    const BoundaryModel b = u.grid.boundary;
    if (b.kind == BoundaryKind::exterior_constant) {
      s.grid.boundary = BoundaryModel::sided(b.plus >= c ? 1.0 : -1.0, b.minus >= c ? 1.0 : -1.0, b.direction);
    } else {
      s.grid.boundary = BoundaryModel::from_function([b, c](const Point& z) { return b.exterior_value(z) >= c ? 1.0 : -1.0; });
    }
  }
  return s;
}

IndicatorSet superlevel_from_mask(const Grid& g, Mask m) {
  if (m.size() != g.node_count()) throw GridMismatch("mask size does not match grid");
  return IndicatorSet{g, std::move(m)};
}

double hausdorff_distance(const IndicatorSet& A, const IndicatorSet& B, const BallRegion& region) {
  if (!A.grid.same_lattice(B.grid)) throw GridMismatch("hausdorff_distance requires sets on the same grid");
  const Grid& g = A.grid;
  const Mask r = region_mask(g, region);
  std::vector<Point> pa, pb, only_a, only_b;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!r[i]) continue;
    const Point p = g.position(i);
    if (A.membership[i]) pa.push_back(p);
    if (B.membership[i]) pb.push_back(p);
    if (A.membership[i] && !B.membership[i]) only_a.push_back(p);
    if (B.membership[i] && !A.membership[i]) only_b.push_back(p);
  }
  if (pa.empty() || pb.empty()) return std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const Point& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& q : to) {
        const double d2 = (p - q).squaredNorm();
        if (d2 < best) best = d2;
        if (best <= worst) break;  // cannot raise the max any more
      }
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(only_a, pb), directed(only_b, pa));
}

ScalarField embed_profile(const ScalarField& profile, const Point& direction, const Grid& grid) {
  if (profile.grid.dim != 1) throw ConfigError("embed_profile expects a 1D profile");
  if (direction.norm() == 0.0) throw ConfigError("embedding direction must be nonzero");
  const Point e = direction.normalized();
  double reach = 0.0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) reach = std::max(reach, std::abs(e.dot(grid.position(i))));
  if (!profile.grid.periodic() && profile.grid.box_radius + 1e-12 < reach)
    throw OutOfDomain("profile box " + format_double(profile.grid.box_radius) + " does not cover projection reach " +
                      format_double(reach));
  Vector v(static_cast<Eigen::Index>(grid.node_count()));
  for (std::size_t i = 0; i < grid.node_count(); ++i)
    v[static_cast<Eigen::Index>(i)] = profile.sample(Point(e.dot(grid.position(i)), 0.0, 0.0));
  ScalarField out(grid, std::move(v));
  out.range_hint = profile.range_hint;
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string field_to_string(const ScalarField& u) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << u.grid.dim << ' ' << u.grid.h << ' ' << u.grid.box_radius << ' ' << u.grid.boundary.token() << '\n';
  for (std::size_t i = 0; i < u.grid.node_count(); ++i) {
    const Point p = u.grid.position(i);
    for (int a = 0; a < u.grid.dim; ++a) os << p[a] << ' ';
    os << u.values[static_cast<Eigen::Index>(i)] << '\n';
  }
  return os.str();
}

ScalarField field_from_string(const std::string& text) {
  std::istringstream is(text);
  int n = 0;
  double h = 0, L = 0;
  std::string token;
  if (!(is >> n >> h >> L >> token)) throw ConfigError("malformed field header");
  Grid g = make_grid(n, L, h, BoundaryModel::parse(token));
  Vector v(static_cast<Eigen::Index>(g.node_count()));
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Point p = g.position(i);
    for (int a = 0; a < n; ++a) {
      double x = 0;
      if (!(is >> x)) throw ConfigError("truncated field body");
      if (std::abs(x - p[a]) > 1e-9 * std::max(1.0, L)) throw ConfigError("field row coordinates out of order");
    }
    if (!(is >> v[static_cast<Eigen::Index>(i)])) throw ConfigError("truncated field body");
  }
  return ScalarField(g, std::move(v));
}

void write_field(const ScalarField& u, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  f << field_to_string(u);
}

ScalarField read_field(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return field_from_string(ss.str());
}

}  // namespace fracac
