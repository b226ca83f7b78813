#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "partition_lab/bounds.hpp"
#include "partition_lab/errors.hpp"

using namespace plab;

namespace {

const double kPi = std::numbers::pi;
const double kJ = 2.404825557695773;

AuditInput nodal_audit(int res, int p, int q, double tol_eq = 0.05) {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), res);
  const auto r = extract_nodal_partition(sample_product(*g, p, q), g);
  ReportOptions o;
  o.tol_eq = tol_eq;
  AuditInput in;
  in.partition = partition_report(nodal_partition(r, g), o);
  return in;
}

const BoundResult& find(const std::vector<BoundResult>& rs, const std::string& name) {
  const auto it = std::find_if(rs.begin(), rs.end(), [&](const BoundResult& r) { return r.name == name; });
  REQUIRE(it != rs.end());
  return *it;
}

} // namespace

TEST_CASE("registry") {
  const auto& ids = bound_registry();
  CHECK(ids.size() == 22u);
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == ids.size());
  AuditInput empty;
  CHECK_THROWS_AS(evaluate("no_such_bound", empty), Error);
  CHECK(audit_all(empty).size() == ids.size());
}

TEST_CASE("missing data is not applicable, never zero") {
  AuditInput in = nodal_audit(32, 2, 1);
  in.partition.has_energy = false;
  for (const char* id : {"faber_krahn", "fk_partition", "bruning_gromes", "polya", "savo_flat", "bga", "fk_lk"}) {
    const auto r = evaluate(id, in);
    CHECK(r.status == BoundStatus::NotApplicable);
    CHECK_FALSE(r.note.empty());
  }
  in.partition.has_graph = false;
  CHECK(evaluate("hales", in).status == BoundStatus::NotApplicable);
  CHECK(evaluate("euler", in).status == BoundStatus::NotApplicable);
}

TEST_CASE("square 2-partition audit") {
  const auto in = nodal_audit(128, 2, 1);
  const auto rs = audit_all(in);
  for (const char* id : {"faber_krahn", "fk_partition", "bruning_gromes", "polya", "savo_flat", "hales_scaled", "bga",
                         "bga_sharp", "univ", "euler", "length_identity"})
    CHECK_MESSAGE(find(rs, id).status == BoundStatus::Pass, id);

  // Independent arithmetic with A = 1, Lambda = 5 pi^2, chi = 1, sigma = 2.
  const double L = std::sqrt(5.0) * kPi;
  const double bg = L / (2 * kJ) + kPi * kJ / (2 * L) * 2.0;
  CHECK(bg == doctest::Approx(2.536).epsilon(0.001));
  CHECK(find(rs, "bruning_gromes").rhs == doctest::Approx(bg).epsilon(0.01));
  CHECK(find(rs, "bruning_gromes").lhs == doctest::Approx(3.0).epsilon(0.01));

  const double den = 4 * kPi + kPi * kPi * kPi, B = -2 * kPi;
  const double savo = 4 * L / den - 2 * kPi * kPi * (B - 2 * kPi) / (L * den);
  CHECK(find(rs, "savo_flat").rhs == doctest::Approx(savo).epsilon(0.01));
  CHECK(find(rs, "savo_flat").note.find("flat specialization") != std::string::npos);
}

TEST_CASE("annulus single part: bga applies") {
  auto g = build_domain(ShapeSpec::annulus(0.5, 1.0), 48);
  AuditInput in;
  in.partition = partition_report(KPartition(g, {whole_domain(g)}));
  CHECK(in.partition.domain.euler_char == 0);
  const auto r = evaluate("bga", in);
  CHECK(r.status == BoundStatus::Pass);
  CHECK(evaluate("savo_flat", in).status == BoundStatus::NotApplicable);  // B = 0
  CHECK(evaluate("polya", in).status == BoundStatus::Pass);
}

TEST_CASE("conditional bounds name their hypotheses") {
  auto in = nodal_audit(32, 2, 1);
  CHECK(evaluate("polya_conj_length", in).status == BoundStatus::NotApplicable);
  in.eigen_index = 2;
  const auto r = evaluate("polya_conj_length", in);
  CHECK(r.status == BoundStatus::Pass);
  CHECK(r.note.find("conditional") != std::string::npos);
  in.lk_upper = in.partition.energy;
  CHECK(evaluate("fk_lk", in).status == BoundStatus::Pass);
}

TEST_CASE("dilation is analytic and keeps flags") {
  const auto in = nodal_audit(48, 2, 2);
  for (double t : {0.5, 2.0}) {
    const auto d = dilated(in, t);
    CHECK(d.partition.energy == doctest::Approx(in.partition.energy / (t * t)));
    CHECK(d.partition.graph.P == doctest::Approx(in.partition.graph.P * t));
    CHECK(d.partition.domain.area == doctest::Approx(in.partition.domain.area * t * t));
    const auto a = audit_all(in), b = audit_all(d);
    for (std::size_t n = 0; n < a.size(); ++n) CHECK_MESSAGE(a[n].status == b[n].status, a[n].name);
  }
}

TEST_CASE("digests are stable and input dependent") {
  const auto in = nodal_audit(32, 2, 1);
  const auto a = evaluate("bruning_gromes", in), b = evaluate("bruning_gromes", in);
  CHECK(a.inputs_digest == b.inputs_digest);
  CHECK(a.inputs_digest.size() == 16u);
  CHECK(evaluate("bruning_gromes", dilated(in, 2.0)).inputs_digest != a.inputs_digest);
}

TEST_CASE("tolerances") {
  CHECK(energy_tolerance(10.0, 100.0, 0.01) == doctest::Approx(10.0));
  const auto in = nodal_audit(32, 2, 1);
  CHECK(length_tolerance(in) > 10 * in.partition.h);
  const auto s = savo_flat_inputs(in.partition.domain);
  CHECK(s.alpha == 0.0);
  CHECK(s.psi == doctest::Approx(kPi));
  CHECK(s.C == doctest::Approx(kPi));
  CHECK(s.B == doctest::Approx(-2 * kPi));
}
