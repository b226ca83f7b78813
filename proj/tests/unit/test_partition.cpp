#include <cmath>
#include <numbers>

#include "doctest.h"
#include "partition_lab/errors.hpp"
#include "partition_lab/partition.hpp"

using namespace plab;

namespace {

KPartition product_partition(const GridPtr& g, int p, int q) {
  return nodal_partition(extract_nodal_partition(sample_product(*g, p, q), g), g);
}

} // namespace

TEST_CASE("kpartition validation") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 16);
  std::vector<int> lab(g->cell_count(), -1);
  for (CellIndex c : g->inside_cells()) lab[c] = (g->col(c) < 4 || g->col(c) > 10) ? 0 : 1;
  CHECK_THROWS_AS(partition_from_labels(g, lab), Error);  // label 0 is disconnected
  for (CellIndex c : g->inside_cells()) lab[c] = g->col(c) < 8 ? 0 : 1;
  const auto p = partition_from_labels(g, lab);
  CHECK(p.k() == 2);
  CHECK(p.strong());
  CHECK(p.uncovered_count() == 0u);
  auto other = build_domain(ShapeSpec::rectangle(1, 1), 16);
  CHECK_THROWS_AS(KPartition(g, {whole_domain(other)}), Error);
  CHECK_THROWS_AS(KPartition(g, {}), Error);
}

TEST_CASE("boundary set of nodal partitions") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 64);
  {
    const auto p = product_partition(g, 2, 1);
    CHECK(p.uncovered_count() == 63u);
    CHECK(p.strong());
    const auto bg = boundary_graph(p);
    CHECK(bg.sigma == 2);
    CHECK(bg.interior_count() == 0);
    CHECK(bg.boundary_count() == 2);
    CHECK(bg.P == doctest::Approx(3.0).epsilon(0.01));
    CHECK(euler_check(p, bg) == 0);
  }
  {
    const auto p = product_partition(g, 2, 2);
    const auto bg = boundary_graph(p);
    CHECK(bg.interior_count() == 1);
    CHECK(bg.boundary_count() == 4);
    CHECK(bg.sigma == 6);
    for (const auto& s : bg.singular_points)
      if (s.kind == SingularPoint::Kind::Interior) {
        CHECK(s.arms == 4);
        CHECK(std::abs(s.location.x - 0.5) <= g->h());
      }
    CHECK(bg.P == doctest::Approx(4.0).epsilon(0.01));
  }
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q) CHECK(euler_check(product_partition(g, p, q)) == 0);
}

TEST_CASE("reports: energies, equipartition and the length identity") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 64);
  const auto rep = partition_report(product_partition(g, 2, 1));
  CHECK(rep.k == 2);
  CHECK(rep.has_energy);
  CHECK(rep.energy == doctest::Approx(5 * M_PI * M_PI).epsilon(0.01));
  CHECK(rep.equipartition);
  CHECK(rep.euler_residual == 0);
  CHECK(rep.mean_energy <= rep.energy);
  CHECK(std::abs(rep.part_boundary_total - 2 * rep.graph.P) < 5 * rep.h * rep.k);
  CHECK(rep.parts[0].area == doctest::Approx(0.5).epsilon(0.02));
  CHECK(rep.parts[0].euler_char == 1);

  ReportOptions geo_only;
  geo_only.eigen = false;
  const auto r2 = partition_report(product_partition(g, 2, 1), geo_only);
  CHECK_FALSE(r2.has_energy);
  CHECK(r2.has_graph);
}

TEST_CASE("vertical split at x = 0.3") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 64);
  std::vector<int> lab(g->cell_count(), -1);
  for (CellIndex c : g->inside_cells()) lab[c] = g->center(c).x < 0.3 ? 0 : 1;
  const auto rep = partition_report(partition_from_labels(g, lab));
  CHECK_FALSE(rep.equipartition);
  // Pixel widths 19 and 44 cells between Dirichlet centers 0..20 and 19..64.
  const double h = g->h();
  const double left = M_PI * M_PI * (1 / std::pow(20 * h, 2) + 1), right = M_PI * M_PI * (1 / std::pow(45 * h, 2) + 1);
  CHECK(rep.parts[0].lambda == doctest::Approx(left).epsilon(0.01));
  CHECK(rep.parts[1].lambda == doctest::Approx(right).epsilon(0.01));
  CHECK(rep.energy == doctest::Approx(rep.parts[0].lambda));
}

TEST_CASE("annulus with two radial cuts") {
  auto g = build_domain(ShapeSpec::annulus(0.5, 1.0), 48);
  std::vector<int> lab(g->cell_count(), -1);
  for (CellIndex c : g->inside_cells()) lab[c] = g->center(c).y > 0 ? 0 : 1;
  const auto p = partition_from_labels(g, lab);
  const auto bg = boundary_graph(p);
  CHECK(bg.boundary_count() == 4);
  CHECK(bg.sigma == 4);
  CHECK(euler_check(p, bg) == 0);
}

TEST_CASE("non-strong partitions have no boundary graph") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 16);
  std::vector<int> lab(g->cell_count(), -1);
  for (CellIndex c : g->inside_cells()) lab[c] = g->col(c) < 4 ? 0 : (g->col(c) > 8 ? 1 : -1);
  const auto p = partition_from_labels(g, lab);
  CHECK_FALSE(p.strong());
  CHECK_THROWS_AS(boundary_graph(p), Error);
  ReportOptions o;
  o.eigen = false;
  CHECK_FALSE(partition_report(p, o).has_graph);
}

TEST_CASE("hexagonal tilings") {
  CHECK(hexagon_side(1.0) == doctest::Approx(std::sqrt(2.0 / (3.0 * std::sqrt(3.0)))));
  auto g = build_domain(ShapeSpec::rectangle(4, 4), 32);
  const auto t = hexagonal_partition(g, 1.0);
  CHECK(t.k() >= 9);
  const auto cover = cover_view(t);
  CHECK(cover.k() == t.k());
  CHECK(cover.uncovered_count() == 0u);
  ReportOptions o;
  o.eigen = false;
  const auto rep = partition_report(cover, o);
  CHECK(rep.euler_residual == 0);
  for (const auto& part : rep.parts) CHECK(part.area == doctest::Approx(1.0).epsilon(0.1));
  CHECK_THROWS_AS(hexagonal_partition(g, 100.0), Error);
}
