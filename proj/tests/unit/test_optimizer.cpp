#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

#include "doctest.h"
#include "partition_lab/errors.hpp"
#include "partition_lab/optimizer.hpp"

using namespace plab;

namespace {

const double kPi = std::numbers::pi;

GridPtr square(int res) { return build_domain(ShapeSpec::rectangle(1, 1), res); }

} // namespace

TEST_CASE("p_energy") {
  const std::vector<double> e{3.0, 4.0};
  CHECK(p_energy(e, 1.0) == doctest::Approx(7.0));
  CHECK(p_energy(e, 2.0) == doctest::Approx(5.0));
  CHECK(p_energy(e, kMaxNorm) == 4.0);
  CHECK(p_energy(e, 64.0) == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("config validation") {
  OptimizerConfig c;
  CHECK_NOTHROW(c.validate());
  c.k = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.p_schedule = {4.0, 2.0};
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.restarts = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("seed partitions cover and balance") {
  auto g = square(32);
  const auto one = seed_partition(g, 1, 7);
  CHECK(one.k() == 1);
  CHECK(one.parts()[0].size() == g->inside_cells().size());

  auto rect = build_domain(ShapeSpec::rectangle(2, 1), 24);
  const auto two = seed_partition(rect, 2, 3);
  CHECK(two.k() == 2);
  CHECK(two.uncovered_count() == 0u);
  const double a = static_cast<double>(two.parts()[0].size()), b = static_cast<double>(two.parts()[1].size());
  CHECK(std::abs(a - b) / (a + b) < 0.2);

  const auto five = seed_partition(g, 5, 11);
  CHECK(five.k() == 5);
  CHECK(five.uncovered_count() == 0u);
  CHECK(seed_partition(g, 5, 11).labels() == five.labels());

  auto tiny = build_domain(ShapeSpec::rectangle(0.25, 0.25), 8);
  CHECK_THROWS_AS(seed_partition(tiny, 50, 1), Error);
}

TEST_CASE("relax_step keeps a near-optimal partition") {
  auto g = square(32);
  const auto whole = seed_partition(g, 1, 1);
  CHECK(relax_step(whole, 1.0).labels() == whole.labels());

  // Halves at x = 1/2: both parts equal, so the interface barely moves.
  std::vector<int> labels(g->cell_count(), -2);
  for (CellIndex c : g->inside_cells()) labels[c] = g->center(c).x < 0.5 ? 0 : 1;
  const auto halves = partition_from_labels(g, labels);
  const auto next = relax_step(halves, 2.0);
  const auto after = next.labels();
  std::size_t changed = 0;
  for (CellIndex c : g->inside_cells()) changed += after[c] != labels[c];
  CHECK(static_cast<double>(changed) <= 0.05 * static_cast<double>(g->inside_cells().size()));
}

TEST_CASE("minimize brackets the k = 2 value on a coarse square") {
  auto g = square(24);
  OptimizerConfig c;
  c.k = 2;
  c.restarts = 2;
  c.max_outer_iters = 60;
  const auto b = minimize(g, c);
  CHECK(b.k == 2);
  CHECK(b.lower == doctest::Approx(2 * kPi * 2.404825557695773 * 2.404825557695773).epsilon(0.02));
  CHECK(b.lower < b.upper);
  CHECK(b.upper == doctest::Approx(5 * kPi * kPi).epsilon(0.06));
  REQUIRE(b.best_partition.has_value());
  CHECK(b.best_partition->k() == 2);
  CHECK(b.runs.size() == 2u);
  for (const auto& run : b.runs)
    for (const auto& st : run.stages)
      for (std::size_t n = 1; n < st.objective.size(); ++n) CHECK(st.objective[n] <= st.objective[n - 1] + 1e-9);
}

TEST_CASE("checkpoints resume to the same result") {
  const auto dir = std::filesystem::temp_directory_path() / "plab_test_checkpoint";
  std::filesystem::remove_all(dir);
  auto g = square(16);
  OptimizerConfig c;
  c.k = 3;
  c.restarts = 1;
  c.max_outer_iters = 40;
  c.checkpoint_dir = dir.string();
  const auto first = minimize(g, c);
  CHECK(std::filesystem::exists(dir / "checkpoint_k3_seed1.json"));
  const auto again = minimize(g, c);
  CHECK(again.upper == first.upper);
  CHECK(again.best_partition->labels() == first.best_partition->labels());
  std::filesystem::remove_all(dir);
}

TEST_CASE("hex witness sits above the lower bound") {
  auto g = build_domain(ShapeSpec::rectangle(4, 4), 16);
  const auto w = hex_witness(g, 1.0);
  CHECK(w.k > 0);
  CHECK(w.above_lower);
  CHECK(w.energy_per_k > w.lower_per_k);
  CHECK(w.hexa_per_area == doctest::Approx(18.5901 / 16.0).epsilon(0.01));
}
