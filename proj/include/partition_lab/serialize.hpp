#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "partition_lab/bound_result.hpp"
#include "partition_lab/nodal.hpp"
#include "partition_lab/optimizer.hpp"
#include "partition_lab/partition.hpp"

namespace plab {

/// Twelve significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double x);
/// The value rounded to twelve significant digits, null when non-finite.
nlohmann::json number_json(double x);

nlohmann::json to_json(const Point& p);
nlohmann::json to_json(const GeometryReport& g);
nlohmann::json to_json(const BoundResult& r);
nlohmann::json to_json(const BoundarySetGraph& g);
nlohmann::json to_json(const PartitionReport& r);
nlohmann::json to_json(const CourantScan& s);
nlohmann::json to_json(const LkBracket& b);
nlohmann::json to_json(const HexWitness& w);

/// Labels over the inside cells (row-major), run-length encoded as
/// [label, count] pairs.
nlohmann::json partition_to_json(const KPartition& p);
KPartition partition_from_json(const nlohmann::json& j, const GridPtr& grid);

/// Fixed-format CSV. Cells are written verbatim; quote them beforehand if needed.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  CsvTable& row(std::vector<std::string> cells);
  std::string str() const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

CsvTable audit_csv(const std::vector<BoundResult>& results);
CsvTable eigenvalue_csv(const std::vector<EigenPair>& pairs, const std::vector<double>& reference = {});
/// x, y then one column per eigenvector (grid function on the inside cells).
CsvTable eigenvector_csv(const DirichletOperator& op, const std::vector<EigenPair>& pairs);

/// Header of an eigenpair file set: domain, h, values and the vector layout.
nlohmann::json eigenpair_header(const DirichletOperator& op, const std::vector<EigenPair>& pairs);

/// JSON text with a trailing newline.
std::string dump(const nlohmann::json& j);

} // namespace plab
