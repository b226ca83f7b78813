#include "partition_lab/grid_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "partition_lab/contour.hpp"
#include "partition_lab/errors.hpp"

namespace plab {

const char* to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::DegenerateDomain: return "DegenerateDomain";
  case ErrorCode::InvalidShape: return "InvalidShape";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::InvalidEigenfunction: return "InvalidEigenfunction";
  case ErrorCode::NotApplicable: return "NotApplicable";
  case ErrorCode::NotStrong: return "NotStrong";
  case ErrorCode::DegenerateTiling: return "DegenerateTiling";
  case ErrorCode::TooManyParts: return "TooManyParts";
  case ErrorCode::ReseedRequired: return "ReseedRequired";
  case ErrorCode::UnknownBound: return "UnknownBound";
  case ErrorCode::InvalidConfig: return "InvalidConfig";
  case ErrorCode::Io: return "Io";
  case ErrorCode::HardAssertion: return "HardAssertion";
  }
  return "Unknown";
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// ---------------------------------------------------------------------------
// DomainGrid / Subdomain

DomainGrid::DomainGrid(Point origin, double h, int nx, int ny, std::vector<double> level,
                       bool exact_boundary)
    : origin_(origin), h_(h), nx_(nx), ny_(ny), level_(std::move(level)), exact_boundary_(exact_boundary) {
  if (!(h_ > 0.0) || nx_ < 1 || ny_ < 1 ||
      level_.size() != static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_)) {
    throw Error(ErrorCode::InvalidArgument, "DomainGrid: bad dimensions");
  }
  for (CellIndex c = 0; c < static_cast<CellIndex>(level_.size()); ++c) {
    if (level_[c] > 0.0) inside_.push_back(c);
  }
  if (inside_.empty()) {
    throw Error(ErrorCode::DegenerateDomain, "domain has no inside cell");
  }
}

Subdomain::Subdomain(GridPtr grid, std::vector<CellIndex> cells)
    : grid_(std::move(grid)), cells_(std::move(cells)) {
  std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
  for (CellIndex c : cells_) {
    if (c < 0 || static_cast<std::size_t>(c) >= grid_->cell_count() || !grid_->inside(c)) {
      throw Error(ErrorCode::InvalidArgument, "Subdomain: cell outside the domain");
    }
  }
}

bool Subdomain::contains(CellIndex c) const {
  return std::binary_search(cells_.begin(), cells_.end(), c);
}

std::vector<std::uint8_t> Subdomain::mask() const {
  std::vector<std::uint8_t> m(grid_->cell_count(), 0);
  for (CellIndex c : cells_) m[c] = 1;
  return m;
}

Subdomain whole_domain(const GridPtr& grid) { return Subdomain(grid, grid->inside_cells()); }

// ---------------------------------------------------------------------------
// Shapes

namespace {

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  auto cross = [](Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  auto on_segment = [](Point a, Point b, Point p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
  };
  const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

void validate_polygon(const std::vector<Point>& v) {
  const std::size_t n = v.size();
  if (n < 3) throw Error(ErrorCode::InvalidShape, "polygon needs at least 3 vertices");
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i], b = v[(i + 1) % n];
    area2 += a.x * b.y - b.x * a.y;
    if (distance(a, b) == 0.0) throw Error(ErrorCode::InvalidShape, "polygon has a zero-length edge");
  }
  if (area2 == 0.0) throw Error(ErrorCode::InvalidShape, "polygon has zero area");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
        throw Error(ErrorCode::InvalidShape, "polygon is not simple");
      }
    }
  }
}

double polygon_level(const std::vector<Point>& v, Point p) {
  double dmin = std::numeric_limits<double>::infinity();
  bool in = false;
  const std::size_t n = v.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = v[j], b = v[i];
    dmin = std::min(dmin, segment_point_distance(a, b, p));
    if ((b.y > p.y) != (a.y > p.y)) {
      const double xs = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < xs) in = !in;
    }
  }
  if (dmin == 0.0) return 0.0;
  return in ? dmin : -dmin;
}

} // namespace

ShapeSpec ShapeSpec::rectangle(double w, double h, Point lower_left) {
  if (!(w > 0.0) || !(h > 0.0)) throw Error(ErrorCode::InvalidShape, "rectangle extents must be positive");
  ShapeSpec s;
  s.kind = Kind::Rectangle;
  s.anchor = lower_left;
  s.width = w;
  s.height = h;
  return s;
}

ShapeSpec ShapeSpec::disk(double r, Point c) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidShape, "disk radius must be positive");
  ShapeSpec s;
  s.kind = Kind::Disk;
  s.anchor = c;
  s.r_out = r;
  return s;
}

ShapeSpec ShapeSpec::annulus(double r_in, double r_out, Point c) {
  if (!(r_in > 0.0) || !(r_out > r_in)) throw Error(ErrorCode::InvalidShape, "annulus needs 0 < r_in < r_out");
  ShapeSpec s;
  s.kind = Kind::Annulus;
  s.anchor = c;
  s.r_in = r_in;
  s.r_out = r_out;
  return s;
}

ShapeSpec ShapeSpec::polygon(std::vector<Point> vertices) {
  validate_polygon(vertices);
  ShapeSpec s;
  s.kind = Kind::Polygon;
  s.vertices = std::move(vertices);
  return s;
}

ShapeSpec ShapeSpec::hexagon(double area, Point c) {
  if (!(area > 0.0)) throw Error(ErrorCode::InvalidShape, "hexagon area must be positive");
  ShapeSpec s;
  s.kind = Kind::Hexagon;
  s.anchor = c;
  s.area = area;
  s.vertices = hexagon_vertices(c, area);
  return s;
}

ShapeSpec ShapeSpec::make_union(ShapeSpec a, ShapeSpec b) {
  ShapeSpec s;
  s.kind = Kind::Union;
  s.operands = {std::move(a), std::move(b)};
  return s;
}

ShapeSpec ShapeSpec::difference(ShapeSpec a, ShapeSpec b) {
  ShapeSpec s;
  s.kind = Kind::Difference;
  s.operands = {std::move(a), std::move(b)};
  return s;
}

double ShapeSpec::level(Point p) const {
  switch (kind) {
  case Kind::Rectangle: {
    const double x0 = anchor.x, x1 = anchor.x + width;
    const double y0 = anchor.y, y1 = anchor.y + height;
    const double dx = std::min(p.x - x0, x1 - p.x);
    const double dy = std::min(p.y - y0, y1 - p.y);
    if (dx >= 0.0 && dy >= 0.0) return std::min(dx, dy);
    const double ox = std::max(0.0, -dx), oy = std::max(0.0, -dy);
    return -std::hypot(ox, oy);
  }
  case Kind::Disk:
    return r_out - distance(p, anchor);
  case Kind::Annulus: {
    const double d = distance(p, anchor);
    return std::min(r_out - d, d - r_in);
  }
  case Kind::Polygon:
  case Kind::Hexagon:
    return polygon_level(vertices, p);
  case Kind::Union:
    return std::max(operands[0].level(p), operands[1].level(p));
  case Kind::Difference:
    return std::min(operands[0].level(p), -operands[1].level(p));
  }
  return -1.0;
}

void ShapeSpec::bounds(Point& lo, Point& hi) const {
  switch (kind) {
  case Kind::Rectangle:
    lo = anchor;
    hi = {anchor.x + width, anchor.y + height};
    return;
  case Kind::Disk:
  case Kind::Annulus:
    lo = {anchor.x - r_out, anchor.y - r_out};
    hi = {anchor.x + r_out, anchor.y + r_out};
    return;
  case Kind::Polygon:
  case Kind::Hexagon:
    lo = hi = vertices.front();
    for (const Point& v : vertices) {
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
    }
    return;
  case Kind::Union: {
    Point lo2, hi2;
    operands[0].bounds(lo, hi);
    operands[1].bounds(lo2, hi2);
    lo = {std::min(lo.x, lo2.x), std::min(lo.y, lo2.y)};
    hi = {std::max(hi.x, hi2.x), std::max(hi.y, hi2.y)};
    return;
  }
  case Kind::Difference:
    operands[0].bounds(lo, hi);
    return;
  }
}

ShapeSpec ShapeSpec::dilated(double t) const {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "dilation factor must be positive");
  ShapeSpec s = *this;
  s.anchor = t * anchor;
  s.width *= t;
  s.height *= t;
  s.r_in *= t;
  s.r_out *= t;
  s.area *= t * t;
  for (Point& v : s.vertices) v = t * v;
  for (ShapeSpec& o : s.operands) o = o.dilated(t);
  return s;
}

std::vector<Point> hexagon_vertices(Point center, double area) {
  const double side = std::sqrt(2.0 * area / (3.0 * std::sqrt(3.0)));
  std::vector<Point> v;
  v.reserve(6);
  for (int k = 0; k < 6; ++k) {
    const double a = k * std::numbers::pi / 3.0;
    v.push_back({center.x + side * std::cos(a), center.y + side * std::sin(a)});
  }
  return v;
}

GridPtr build_domain(const ShapeSpec& spec, double resolution) {
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  const double h = 1.0 / resolution;
  Point lo, hi;
  spec.bounds(lo, hi);
  const long i0 = static_cast<long>(std::floor(lo.x / h)) - 1;
  const long i1 = static_cast<long>(std::ceil(hi.x / h)) + 1;
  const long j0 = static_cast<long>(std::floor(lo.y / h)) - 1;
  const long j1 = static_cast<long>(std::ceil(hi.y / h)) + 1;
  const long nx = i1 - i0 + 1, ny = j1 - j0 + 1;
  if (nx * ny > 64L * 1024 * 1024) throw Error(ErrorCode::InvalidArgument, "grid too large");
  // Levels within this band of zero count as on the boundary.
  const double snap = 1e-9 * h;
  std::vector<double> level(static_cast<std::size_t>(nx * ny));
  for (long j = 0; j < ny; ++j) {
    for (long i = 0; i < nx; ++i) {
      const Point p{static_cast<double>(i0 + i) * h, static_cast<double>(j0 + j) * h};
      double v = spec.level(p);
      if (std::abs(v) <= snap) v = 0.0;
      level[static_cast<std::size_t>(j * nx + i)] = v;
    }
  }
  bool any = std::any_of(level.begin(), level.end(), [](double v) { return v > 0.0; });
  if (!any) throw Error(ErrorCode::DegenerateDomain, "shape covers no cell center");
  return std::make_shared<const DomainGrid>(Point{static_cast<double>(i0) * h, static_cast<double>(j0) * h},
                                            h, static_cast<int>(nx), static_cast<int>(ny), std::move(level));
}

ShapeSpec shape_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& m) { return Error(ErrorCode::InvalidConfig, "shape: " + m); };
  if (!j.is_object() || !j.contains("shape") || !j["shape"].is_string()) throw fail("missing \"shape\"");
  const std::string kind = j["shape"];
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  auto num = [&](std::initializer_list<const char*> keys) -> double {
    for (const char* k : keys) {
      if (params.contains(k)) {
        if (!params[k].is_number()) throw fail(std::string("parameter ") + k + " must be a number");
        return params[k].get<double>();
      }
    }
    throw fail("missing parameter " + std::string(*keys.begin()));
  };
  auto point = [&](const char* key, Point def) -> Point {
    if (!params.contains(key)) return def;
    const auto& p = params[key];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw fail(std::string(key) + " must be [x, y]");
    return {p[0].get<double>(), p[1].get<double>()};
  };
  auto operands = [&]() {
    std::vector<ShapeSpec> ops;
    if (params.contains("operands")) {
      for (const auto& o : params["operands"]) ops.push_back(shape_from_json(o));
    } else if (params.contains("a") && params.contains("b")) {
      ops.push_back(shape_from_json(params["a"]));
      ops.push_back(shape_from_json(params["b"]));
    }
    if (ops.size() != 2) throw fail("boolean shapes need exactly two operands");
    return ops;
  };

  ShapeSpec s;
  if (kind == "rectangle") {
    s = ShapeSpec::rectangle(num({"width", "w"}), num({"height", "h"}), point("origin", {}));
  } else if (kind == "disk") {
    s = ShapeSpec::disk(num({"r", "radius"}), point("center", {}));
  } else if (kind == "annulus") {
    s = ShapeSpec::annulus(num({"r_in"}), num({"r_out"}), point("center", {}));
  } else if (kind == "hexagon") {
    s = ShapeSpec::hexagon(num({"area"}), point("center", {}));
  } else if (kind == "polygon") {
    if (!params.contains("vertices") || !params["vertices"].is_array()) throw fail("polygon needs vertices");
    std::vector<Point> v;
    for (const auto& p : params["vertices"]) {
      if (!p.is_array() || p.size() != 2) throw fail("vertex must be [x, y]");
      v.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    s = ShapeSpec::polygon(std::move(v));
  } else if (kind == "union") {
    auto ops = operands();
    s = ShapeSpec::make_union(std::move(ops[0]), std::move(ops[1]));
  } else if (kind == "difference") {
    auto ops = operands();
    s = ShapeSpec::difference(std::move(ops[0]), std::move(ops[1]));
  } else {
    throw fail("unknown shape \"" + kind + "\"");
  }
  if (params.contains("scale")) s = s.dilated(num({"scale"}));
  return s;
}

nlohmann::json shape_to_json(const ShapeSpec& s) {
  using nlohmann::json;
  auto pt = [](Point p) { return json::array({p.x, p.y}); };
  switch (s.kind) {
  case ShapeSpec::Kind::Rectangle:
    return {{"shape", "rectangle"}, {"params", {{"width", s.width}, {"height", s.height}, {"origin", pt(s.anchor)}}}};
  case ShapeSpec::Kind::Disk:
    return {{"shape", "disk"}, {"params", {{"r", s.r_out}, {"center", pt(s.anchor)}}}};
  case ShapeSpec::Kind::Annulus:
    return {{"shape", "annulus"}, {"params", {{"r_in", s.r_in}, {"r_out", s.r_out}, {"center", pt(s.anchor)}}}};
  case ShapeSpec::Kind::Hexagon:
    return {{"shape", "hexagon"}, {"params", {{"area", s.area}, {"center", pt(s.anchor)}}}};
  case ShapeSpec::Kind::Polygon: {
    json v = json::array();
    for (const Point& p : s.vertices) v.push_back(pt(p));
    return {{"shape", "polygon"}, {"params", {{"vertices", v}}}};
  }
  case ShapeSpec::Kind::Union:
  case ShapeSpec::Kind::Difference:
    return {{"shape", s.kind == ShapeSpec::Kind::Union ? "union" : "difference"},
            {"params", {{"operands", json::array({shape_to_json(s.operands[0]), shape_to_json(s.operands[1])})}}}};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Measurements

int euler_characteristic(const DomainGrid& g, std::span<const std::uint8_t> member) {
  long faces = 0, edges = 0, vertices = 0;
  const int nx = g.nx(), ny = g.ny();
  auto m = [&](int i, int j) { return g.in_grid(i, j) && member[g.index(i, j)] != 0; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!m(i, j)) continue;
      ++faces;
      if (m(i + 1, j)) ++edges;
      if (m(i, j + 1)) ++edges;
      if (m(i + 1, j) && m(i, j + 1) && m(i + 1, j + 1)) ++vertices;
    }
  }
  return static_cast<int>(vertices - edges + faces);
}

namespace {

// Felzenszwalb-Huttenlocher lower envelope of parabolas.
constexpr double kFar = 1e20;

void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  auto cut = [&](int q, int p) {
    return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
  };
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = cut(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = cut(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

} // namespace

std::vector<double> distance_to_complement(const DomainGrid& g, std::span<const std::uint8_t> member) {
  // Work on a grid padded by one non-member ring.
  const int w = g.nx() + 2, ht = g.ny() + 2;
  std::vector<double> grid(static_cast<std::size_t>(w) * ht, 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (member[g.index(i, j)]) grid[static_cast<std::size_t>(j + 1) * w + (i + 1)] = kFar;

  const int n = std::max(w, ht);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  f.resize(ht);
  d.resize(ht);
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j < ht; ++j) f[j] = grid[static_cast<std::size_t>(j) * w + i];
    edt_1d(f, d, v, z);
    for (int j = 0; j < ht; ++j) grid[static_cast<std::size_t>(j) * w + i] = d[j];
  }
  f.resize(w);
  d.resize(w);
  for (int j = 0; j < ht; ++j) {
    for (int i = 0; i < w; ++i) f[i] = grid[static_cast<std::size_t>(j) * w + i];
    edt_1d(f, d, v, z);
    for (int i = 0; i < w; ++i) grid[static_cast<std::size_t>(j) * w + i] = d[i];
  }
  std::vector<double> out(g.cell_count(), 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      out[g.index(i, j)] = std::sqrt(grid[static_cast<std::size_t>(j + 1) * w + (i + 1)]) * g.h();
  return out;
}

namespace {

std::vector<Point> convex_hull(std::vector<Point> p) {
  std::sort(p.begin(), p.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (p.size() < 3) return p;
  auto cross = [](Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Point> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

} // namespace

namespace {

// The cells' bounding box padded by two cells, as its own grid. Contours,
// distances and counts are local, so measuring on the window is exact.
Subdomain windowed(const Subdomain& sub) {
  const DomainGrid& g = sub.grid();
  int i0 = g.nx(), i1 = -1, j0 = g.ny(), j1 = -1;
  for (CellIndex c : sub.cells()) {
    i0 = std::min(i0, g.col(c));
    i1 = std::max(i1, g.col(c));
    j0 = std::min(j0, g.row(c));
    j1 = std::max(j1, g.row(c));
  }
  i0 = std::max(0, i0 - 2);
  j0 = std::max(0, j0 - 2);
  i1 = std::min(g.nx() - 1, i1 + 2);
  j1 = std::min(g.ny() - 1, j1 + 2);
  const int w = i1 - i0 + 1, ht = j1 - j0 + 1;
  if (4L * w * ht >= static_cast<long>(g.cell_count())) return sub;
  std::vector<double> level(static_cast<std::size_t>(w) * ht);
  for (int j = 0; j < ht; ++j)
    for (int i = 0; i < w; ++i) level[static_cast<std::size_t>(j) * w + i] = g.level(g.index(i0 + i, j0 + j));
  const Point o = g.origin();
  auto local = std::make_shared<const DomainGrid>(Point{o.x + i0 * g.h(), o.y + j0 * g.h()}, g.h(), w, ht,
                                                  std::move(level), g.exact_boundary());
  std::vector<CellIndex> cells;
  cells.reserve(sub.size());
  for (CellIndex c : sub.cells()) cells.push_back((g.row(c) - j0) * w + (g.col(c) - i0));
  return Subdomain(std::move(local), std::move(cells));
}

} // namespace

GeometryReport measure(const Subdomain& whole) {
  if (whole.empty()) throw Error(ErrorCode::InvalidArgument, "measure: empty subdomain");
  const Subdomain sub = windowed(whole);
  const DomainGrid& g = sub.grid();
  const auto member = sub.mask();
  const auto loops = member_contours(g, member);

  GeometryReport r;
  r.cell_area = static_cast<double>(sub.size()) * g.h() * g.h();
  r.area = contour_area(loops);
  r.boundary_length = contour_length(loops);
  const auto dist = distance_to_complement(g, member);
  for (CellIndex c : sub.cells()) r.inner_radius = std::max(r.inner_radius, dist[c]);

  std::vector<Point> pts;
  for (const auto& l : loops) pts.insert(pts.end(), l.points.begin(), l.points.end());
  const auto hull = convex_hull(std::move(pts));
  for (std::size_t a = 0; a < hull.size(); ++a)
    for (std::size_t b = a + 1; b < hull.size(); ++b) r.diameter = std::max(r.diameter, distance(hull[a], hull[b]));
  r.euler_char = euler_characteristic(g, member);
  return r;
}

std::vector<Subdomain> connected_components(std::span<const CellIndex> cells, const GridPtr& grid) {
  const DomainGrid& g = *grid;
  std::vector<std::int32_t> state(g.cell_count(), -1); // -1 not in set, -2 unvisited member, >=0 label
  for (CellIndex c : cells) state[c] = -2;
  std::vector<CellIndex> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<Subdomain> out;
  std::vector<CellIndex> stack;
  for (CellIndex seed : sorted) {
    if (state[seed] != -2) continue;
    const std::int32_t label = static_cast<std::int32_t>(out.size());
    std::vector<CellIndex> comp;
    stack.push_back(seed);
    state[seed] = label;
    while (!stack.empty()) {
      const CellIndex c = stack.back();
      stack.pop_back();
      comp.push_back(c);
      const int i = g.col(c), j = g.row(c);
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int a = i + di[k], b = j + dj[k];
        if (!g.in_grid(a, b)) continue;
        const CellIndex n = g.index(a, b);
        if (state[n] == -2) {
          state[n] = label;
          stack.push_back(n);
        }
      }
    }
    out.emplace_back(grid, std::move(comp));
  }
  return out;
}

} // namespace plab
