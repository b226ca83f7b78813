#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace plab {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
double distance(Point a, Point b);

using CellIndex = std::int32_t;

/// Uniform grid over the bounding box of a plane domain.
///
/// Cell (i, j) has its center at origin + (i*h, j*h) and index j*nx + i.
/// A cell is inside when its center lies strictly inside the shape. Alongside
/// the mask the grid keeps a signed level value per cell (positive inside,
/// zero on the boundary, negative outside, approximately a signed distance),
/// used to place boundary contour vertices between cell centers.
class DomainGrid {
public:
  /// `exact_boundary`: levels are a signed distance to a true boundary, so
  /// contour vertices placed from them are kept fixed during smoothing.
  DomainGrid(Point origin, double h, int nx, int ny, std::vector<double> level,
             bool exact_boundary = true);

  Point origin() const noexcept { return origin_; }
  double h() const noexcept { return h_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  std::size_t cell_count() const noexcept { return level_.size(); }

  CellIndex index(int i, int j) const noexcept { return j * nx_ + i; }
  int col(CellIndex c) const noexcept { return c % nx_; }
  int row(CellIndex c) const noexcept { return c / nx_; }
  Point center(CellIndex c) const noexcept {
    return {origin_.x + col(c) * h_, origin_.y + row(c) * h_};
  }
  bool in_grid(int i, int j) const noexcept {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_;
  }

  bool inside(CellIndex c) const noexcept { return level_[c] > 0.0; }
  bool inside(int i, int j) const noexcept {
    return in_grid(i, j) && level_[index(i, j)] > 0.0;
  }
  double level(CellIndex c) const noexcept { return level_[c]; }
  std::span<const double> levels() const noexcept { return level_; }
  bool exact_boundary() const noexcept { return exact_boundary_; }

  const std::vector<CellIndex>& inside_cells() const noexcept { return inside_; }

private:
  Point origin_;
  double h_;
  int nx_;
  int ny_;
  std::vector<double> level_;
  std::vector<CellIndex> inside_;
  bool exact_boundary_;
};

using GridPtr = std::shared_ptr<const DomainGrid>;

/// A set of inside cells of a grid. Cells are kept sorted.
class Subdomain {
public:
  Subdomain(GridPtr grid, std::vector<CellIndex> cells);

  const DomainGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const std::vector<CellIndex>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }
  bool contains(CellIndex c) const;

  /// Membership mask over all grid cells.
  std::vector<std::uint8_t> mask() const;

private:
  GridPtr grid_;
  std::vector<CellIndex> cells_;
};

/// The whole inside of a grid as one subdomain.
Subdomain whole_domain(const GridPtr& grid);

struct GeometryReport {
  double area = 0.0;            // enclosed by the boundary contour
  double cell_area = 0.0;       // (#cells) * h^2, exact bookkeeping
  double boundary_length = 0.0;
  double inner_radius = 0.0;
  double diameter = 0.0;
  int euler_char = 0;
};

/// Declarative shape description. Coordinates in length units.
struct ShapeSpec {
  enum class Kind { Rectangle, Disk, Annulus, Polygon, Hexagon, Union, Difference };
  Kind kind = Kind::Rectangle;
  // rectangle: lower-left corner + extents; disk/annulus/hexagon: center.
  Point anchor;
  double width = 0.0, height = 0.0;
  double r_in = 0.0, r_out = 0.0;
  double area = 0.0;  // hexagon
  std::vector<Point> vertices;
  std::vector<ShapeSpec> operands;

  static ShapeSpec rectangle(double w, double h, Point lower_left = {});
  static ShapeSpec disk(double r, Point c = {});
  static ShapeSpec annulus(double r_in, double r_out, Point c = {});
  static ShapeSpec polygon(std::vector<Point> vertices);
  static ShapeSpec hexagon(double area, Point c = {});
  static ShapeSpec make_union(ShapeSpec a, ShapeSpec b);
  static ShapeSpec difference(ShapeSpec a, ShapeSpec b);

  /// Signed level value at p: > 0 strictly inside.
  double level(Point p) const;
  void bounds(Point& lo, Point& hi) const;
  /// Analytic dilation about the coordinate origin.
  ShapeSpec dilated(double t) const;
};

/// Regular flat-top hexagon vertices, counter-clockwise.
std::vector<Point> hexagon_vertices(Point center, double area);

/// `resolution` = cells per unit length, h = 1/resolution. Cell centers sit
/// on the lattice h*Z^2, so rectangle sides with lattice coordinates carry
/// boundary cells that are not inside.
GridPtr build_domain(const ShapeSpec& spec, double resolution);

ShapeSpec shape_from_json(const nlohmann::json& j);
nlohmann::json shape_to_json(const ShapeSpec& spec);

GeometryReport measure(const Subdomain& sub);

/// Maximal 4-connected components, sorted by smallest cell index.
std::vector<Subdomain> connected_components(std::span<const CellIndex> cells,
                                            const GridPtr& grid);

/// Euler characteristic of the open union of cells: V - E + F where F are the
/// cells, E the edges shared by two member cells and V the corners whose four
/// cells are all members.
int euler_characteristic(const DomainGrid& grid, std::span<const std::uint8_t> member);

/// Exact Euclidean distance from each member cell center to the nearest
/// non-member cell center (cells beyond the grid count as non-members).
std::vector<double> distance_to_complement(const DomainGrid& grid,
                                           std::span<const std::uint8_t> member);

} // namespace plab
