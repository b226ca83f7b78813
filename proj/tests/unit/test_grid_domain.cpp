#include <cmath>
#include <numbers>

#include "doctest.h"
#include "partition_lab/errors.hpp"
#include "partition_lab/grid_domain.hpp"

using namespace plab;

TEST_CASE("unit square lattice") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 64);
  CHECK(g->inside_cells().size() == 63u * 63u);
  CHECK(g->h() == doctest::Approx(1.0 / 64));
  const auto geo = measure(whole_domain(g));
  CHECK(geo.area == doctest::Approx(1.0).epsilon(3.0 / (64.0 * 64.0)));
  CHECK(geo.cell_area == doctest::Approx(63.0 * 63.0 / 4096.0));
  CHECK(geo.boundary_length == doctest::Approx(4.0).epsilon(0.01));
  CHECK(geo.euler_char == 1);
  CHECK(std::abs(geo.inner_radius - 0.5) <= g->h());
  CHECK(geo.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("disk, annulus and hexagon geometry") {
  const double h = 1.0 / 64;
  auto disk = build_domain(ShapeSpec::disk(1.0), 64);
  const auto d = measure(whole_domain(disk));
  CHECK(d.area == doctest::Approx(std::numbers::pi).epsilon(0.01));
  CHECK(d.boundary_length == doctest::Approx(2 * std::numbers::pi).epsilon(0.01));
  CHECK(d.euler_char == 1);
  CHECK(std::abs(d.inner_radius - 1.0) <= 2 * h);

  auto ann = build_domain(ShapeSpec::annulus(0.5, 1.0), 64);
  const auto a = measure(whole_domain(ann));
  CHECK(a.euler_char == 0);
  CHECK(a.area == doctest::Approx(0.75 * std::numbers::pi).epsilon(0.02));
  CHECK(std::abs(a.inner_radius - 0.25) <= 2 * h);

  auto hex = build_domain(ShapeSpec::hexagon(1.0), 64);
  CHECK(measure(whole_domain(hex)).area == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("shape json round trip and errors") {
  const auto s = ShapeSpec::difference(ShapeSpec::rectangle(2, 1), ShapeSpec::disk(0.25, {1, 0.5}));
  const auto j = shape_to_json(s);
  const auto back = shape_from_json(j);
  CHECK(shape_to_json(back) == j);
  CHECK(back.level({0.2, 0.2}) > 0);
  CHECK(back.level({1.0, 0.5}) < 0);
  CHECK_THROWS_AS(shape_from_json(nlohmann::json{{"shape", "blob"}}), Error);
  CHECK_THROWS_AS(shape_from_json(nlohmann::json::parse(R"({"shape":"disk","params":{}})")), Error);
}

TEST_CASE("dilation scales level sets") {
  const auto s = ShapeSpec::disk(1.0, {0.5, 0.0});
  const auto t = s.dilated(2.0);
  CHECK(t.level({1.0, 0.0}) > 0);
  CHECK(t.level({3.1, 0.0}) < 0);
  auto g = build_domain(t, 32);
  CHECK(measure(whole_domain(g)).area == doctest::Approx(4 * std::numbers::pi).epsilon(0.01));
}

TEST_CASE("components and distance transform") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 16);
  std::vector<CellIndex> cells;
  for (CellIndex c : g->inside_cells())
    if (g->col(c) < 4 || g->col(c) > 10) cells.push_back(c);
  const auto comps = connected_components(cells, g);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].cells().front() < comps[1].cells().front());

  const auto mask = whole_domain(g).mask();
  const auto dist = distance_to_complement(*g, mask);
  auto at = [&](double x, double y) {
    const int i = static_cast<int>(std::lround((x - g->origin().x) / g->h()));
    const int j = static_cast<int>(std::lround((y - g->origin().y) / g->h()));
    return dist[g->index(i, j)];
  };
  CHECK(at(g->h(), g->h()) == doctest::Approx(g->h()));
  CHECK(at(0.5, 0.5) == doctest::Approx(0.5));
  CHECK(euler_characteristic(*g, mask) == 1);
}

TEST_CASE("subdomain rejects outside cells") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 8);
  CHECK_THROWS_AS(Subdomain(g, {g->index(0, 0)}), Error);
  CHECK_THROWS(build_domain(ShapeSpec::rectangle(1, 1), 0.5));
}
