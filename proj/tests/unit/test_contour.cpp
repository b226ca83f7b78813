#include <cmath>

#include "doctest.h"
#include "partition_lab/contour.hpp"

using namespace plab;

TEST_CASE("polyline measures") {
  const Polyline sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(polyline_length(sq, true) == doctest::Approx(4.0));
  CHECK(polyline_length(sq, false) == doctest::Approx(3.0));
  CHECK(signed_area(sq) == doctest::Approx(1.0));
  const Polyline cw(sq.rbegin(), sq.rend());
  CHECK(signed_area(cw) == doctest::Approx(-1.0));
}

TEST_CASE("smoothing keeps open ends and pinned vertices") {
  const Polyline zig{{0, 0}, {1, 1}, {2, 0}, {3, 1}, {4, 0}};
  const auto s = smoothed(zig, {}, false, 8);
  CHECK(s.front().x == 0.0);
  CHECK(s.back().x == 4.0);
  CHECK(polyline_length(s, false) < polyline_length(zig, false));
  const std::vector<std::uint8_t> pin{0, 0, 1, 0, 0};
  CHECK(smoothed(zig, pin, false, 8)[2].y == 0.0);
}

TEST_CASE("segment helpers") {
  CHECK(segment_point_distance({0, 0}, {2, 0}, {1, 1}) == doctest::Approx(1.0));
  CHECK(segment_point_distance({0, 0}, {2, 0}, {3, 0}) == doctest::Approx(1.0));
  CHECK(clipped_length({-2, 0}, {2, 0}, {0, 0}, 1.0) == doctest::Approx(2.0));
  CHECK(clipped_length({0, 0}, {2, 0}, {0, 0}, 1.0) == doctest::Approx(1.0));
  CHECK(clipped_length({-2, 2}, {2, 2}, {0, 0}, 1.0) == 0.0);
}

TEST_CASE("member contours of a disk") {
  auto g = build_domain(ShapeSpec::disk(1.0), 32);
  const auto loops = member_contours(*g, whole_domain(g).mask());
  REQUIRE(loops.size() == 1);
  CHECK(contour_area(loops) == doctest::Approx(M_PI).epsilon(0.01));
  CHECK(contour_length(loops) == doctest::Approx(2 * M_PI).epsilon(0.01));
  const auto ann = build_domain(ShapeSpec::annulus(0.4, 1.0), 32);
  CHECK(member_contours(*ann, whole_domain(ann).mask()).size() == 2);
}

TEST_CASE("crack crossing is interpolated at the true boundary") {
  auto g = build_domain(ShapeSpec::disk(1.0), 16);
  // Last inside cell on the positive x axis and its outside neighbor.
  int i = 0;
  const int j = static_cast<int>(std::lround((0.0 - g->origin().y) / g->h()));
  while (g->inside(i + 1, j) || !g->inside(i, j)) ++i;
  const Point p = crack_crossing(*g, g->index(i, j), g->index(i + 1, j));
  CHECK(p.x == doctest::Approx(1.0).epsilon(1e-3));
}
