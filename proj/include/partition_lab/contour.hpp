#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "partition_lab/grid_domain.hpp"

namespace plab {

using Polyline = std::vector<Point>;

/// Contour polyline with per-vertex pin flags. Pinned vertices were placed on
/// the level-set boundary and are exact to interpolation order; smoothing
/// leaves them in place.
struct Contour {
  Polyline points;
  std::vector<std::uint8_t> pinned;
};

/// Closed contours of a member set, one vertex per crack edge between a
/// member cell and a non-member cell. The vertex sits on the segment joining
/// the two cell centers: at its midpoint when the non-member cell is inside
/// the domain, at the zero of the linearly interpolated level otherwise.
/// Loops run with members on the left, so outer loops are counter-clockwise
/// and holes clockwise; diagonal member pairs stay separate (4-connectivity).
std::vector<Contour> member_contours(const DomainGrid& grid,
                                      std::span<const std::uint8_t> member);

/// Crossing point on the segment from member cell `in` to neighbor `out`.
Point crack_crossing(const DomainGrid& grid, CellIndex in, CellIndex out);

/// Binomial smoothing passes used before length measurement. Removes the
/// staircase of pixel contours while leaving straight runs straight.
inline constexpr int kContourSmoothingPasses = 8;

/// Open lines keep their end points; `pinned` may be empty.
Polyline smoothed(const Polyline& line, std::span<const std::uint8_t> pinned, bool closed,
                  int passes = kContourSmoothingPasses);
double polyline_length(const Polyline& line, bool closed);
double signed_area(const Polyline& loop);

/// Length of a contour set measured after smoothing.
double contour_length(const std::vector<Contour>& loops);
double contour_area(const std::vector<Contour>& loops);

/// Length of a polyline inside the open disk B(c, r).
double clipped_length(Point a, Point b, Point c, double r);
double segment_point_distance(Point a, Point b, Point p);

} // namespace plab
