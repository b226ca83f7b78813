#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "partition_lab/constants.hpp"
#include "partition_lab/errors.hpp"
#include "partition_lab/nodal.hpp"

using namespace plab;

TEST_CASE("nodal domains of products on the square") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 64);
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q) {
      const auto r = extract_nodal_partition(sample_product(*g, p, q), g);
      CHECK(r.mu == p * q);
      CHECK(r.signs.size() == static_cast<std::size_t>(r.mu));
    }
  const auto r = extract_nodal_partition(sample_product(*g, 2, 1), g, 2, 5 * M_PI * M_PI);
  REQUIRE(r.mu == 2);
  CHECK(r.domains[0].size() == r.domains[1].size());
  CHECK(r.signs[0] == -r.signs[1]);
  // The line x = 1/2 falls on cell centers: those cells stay uncovered.
  CHECK(r.dead_band_cells == 63);
  CHECK(r.nodal_set.total_length == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("nodal length inside a disk") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 128);
  const auto r = extract_nodal_partition(sample_product(*g, 2, 2), g, 5, 8 * M_PI * M_PI);
  CHECK(nodal_length(r) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(nodal_length(r, Disk{{0.5, 0.5}, 0.2}) == doctest::Approx(0.8).epsilon(0.02));
  CHECK(nodal_set_hits(r, Disk{{0.5, 0.3}, 0.05}));
  CHECK_FALSE(nodal_set_hits(r, Disk{{0.25, 0.25}, 0.1}));
  CHECK(clearance(*g, {0.5, 0.5}) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("local length check") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 128);
  const auto r = extract_nodal_partition(sample_product(*g, 2, 2), g, 5, 8 * M_PI * M_PI);
  const auto res = local_length_check(r, *g, {0.5, 0.5}, 0.2);
  CHECK(res.bound.status == BoundStatus::Pass);
  CHECK(res.bound.rhs == doctest::Approx(0.01 * 0.04 * std::sqrt(8.0) * M_PI));
  CHECK_FALSE(res.asymptotic_regime);
  CHECK(local_length_check(r, *g, {0.1, 0.1}, 0.2).bound.status == BoundStatus::NotApplicable);
}

TEST_CASE("disk-hitting lemma for admissible disks") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 128);
  const double lambda = 8 * M_PI * M_PI;
  const auto r = extract_nodal_partition(sample_product(*g, 2, 2), g, 5, lambda);
  std::mt19937_64 rng(3);
  const double rmin = constants().j / std::sqrt(lambda);
  std::uniform_real_distribution<double> rad(rmin * 1.01, 0.45);
  int tested = 0;
  while (tested < 30) {
    const double rr = rad(rng);
    std::uniform_real_distribution<double> pos(rr, 1.0 - rr);
    const Point c{pos(rng), pos(rng)};
    if (clearance(*g, c) < rr) continue;
    CHECK(nodal_set_hits(r, Disk{c, rr}));
    ++tested;
  }
}

TEST_CASE("courant scan on a coarse square") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 24);
  const auto scan = courant_pleijel_scan(g, 8);
  CHECK(scan.rows.size() == 8u);
  CHECK(scan.violations == 0);
  CHECK(scan.rows[0].mu == 1);
  CHECK(scan.pleijel_constant == doctest::Approx(constants().pleijel));
  for (const auto& row : scan.rows) CHECK(row.mu <= row.index_bound);
}

TEST_CASE("product modes and pleijel ratio") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 48);
  const auto modes = square_product_modes(25, g);
  for (const auto& m : modes) {
    CHECK(m.mu == m.mu_exact);
    CHECK(m.mu <= m.index);
  }
  CHECK(square_pleijel_ratio(1) == doctest::Approx(1.0));
  CHECK(square_pleijel_ratio(2) == doctest::Approx(1.0));  // (1,2) has mu 2
  CHECK(square_pleijel_ratio(4) == doctest::Approx(1.0));  // (2,2)
  CHECK_THROWS_AS(square_pleijel_ratio(0), Error);
}

TEST_CASE("zero function is rejected") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 8);
  std::vector<double> zero(g->cell_count(), 0.0);
  CHECK_THROWS_AS(extract_nodal_partition(zero, g), Error);
}
