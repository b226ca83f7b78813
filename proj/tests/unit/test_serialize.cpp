#include <cmath>
#include <limits>

#include "doctest.h"
#include "partition_lab/serialize.hpp"

using namespace plab;

TEST_CASE("twelve significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(19.7352455345123) == "19.7352455345");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(number_json(2.0 / 3.0).get<double>() == 0.666666666667);
  CHECK(number_json(std::nan("")).is_null());
}

TEST_CASE("csv") {
  CsvTable t({"a", "b"});
  t.row({"1", "x"}).row({"2", "y"});
  CHECK(t.str() == "a,b\n1,x\n2,y\n");
}

TEST_CASE("label roundtrip") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 16);
  const auto r = extract_nodal_partition(sample_product(*g, 2, 2), g);
  const auto p = nodal_partition(r, g);
  const auto j = partition_to_json(p);
  CHECK(j["k"] == 4);
  CHECK(j["inside_cells"] == g->inside_cells().size());
  std::size_t total = 0;
  for (const auto& run : j["labels_rle"]) total += run[1].get<std::size_t>();
  CHECK(total == g->inside_cells().size());
  const auto back = partition_from_json(j, g);
  CHECK(back.labels() == p.labels());
  auto bad = j;
  bad["inside_cells"] = 3;
  CHECK_THROWS(partition_from_json(bad, g));
}

TEST_CASE("reports without energy carry nulls") {
  auto g = build_domain(ShapeSpec::rectangle(1, 1), 16);
  ReportOptions o;
  o.eigen = false;
  const auto rep = partition_report(KPartition(g, {whole_domain(g)}), o);
  const auto j = to_json(rep);
  CHECK(j["energy"].is_null());
  CHECK(j["parts"][0]["lambda"].is_null());
  CHECK(j["graph"].is_object());

  BoundResult b = not_applicable("x", "no energy");
  const auto jb = to_json(b);
  CHECK(jb["status"] == "not_applicable");
  CHECK(jb["note"] == "no energy");
  CHECK(audit_csv({b}).str().find("x,") != std::string::npos);
}

TEST_CASE("dump ends with a newline") {
  CHECK(dump(nlohmann::json{{"a", 1}}) == "{\n  \"a\": 1\n}\n");
}
