#include "partition_lab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "partition_lab/errors.hpp"

namespace plab {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

nlohmann::json number_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(format_number(x).c_str(), nullptr);
}

nlohmann::json to_json(const Point& p) { return nlohmann::json::array({number_json(p.x), number_json(p.y)}); }

nlohmann::json to_json(const GeometryReport& g) {
  return {{"area", number_json(g.area)},
          {"cell_area", number_json(g.cell_area)},
          {"boundary_length", number_json(g.boundary_length)},
          {"inner_radius", number_json(g.inner_radius)},
          {"diameter", number_json(g.diameter)},
          {"euler_char", g.euler_char}};
}

nlohmann::json to_json(const BoundResult& r) {
  return {{"name", r.name},
          {"status", to_string(r.status)},
          {"kind", r.kind == BoundResult::Kind::Equality ? "equality" : "inequality"},
          {"lhs", number_json(r.lhs)},
          {"rhs", number_json(r.rhs)},
          {"slack", number_json(r.slack)},
          {"tolerance", number_json(r.tolerance)},
          {"note", r.note},
          {"inputs_digest", r.inputs_digest}};
}

nlohmann::json to_json(const BoundarySetGraph& g) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& s : g.singular_points)
    points.push_back({{"location", to_json(s.location)},
                      {"kind", s.kind == SingularPoint::Kind::Interior ? "interior" : "boundary"},
                      {"arms", s.arms},
                      {"index", s.index}});
  nlohmann::json arcs = nlohmann::json::array();
  for (const auto& a : g.arcs) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : a.points) pts.push_back(to_json(p));
    arcs.push_back({{"length", number_json(a.length)}, {"closed", a.closed}, {"points", pts}});
  }
  return {{"P", number_json(g.P)},
          {"boundary_length", number_json(g.boundary_length)},
          {"sigma", g.sigma},
          {"interior_points", g.interior_count()},
          {"boundary_points", g.boundary_count()},
          {"singular_points", points},
          {"arcs", arcs}};
}

nlohmann::json to_json(const PartitionReport& r) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : r.parts) {
    nlohmann::json j = {{"area", number_json(p.area)},
                        {"cell_area", number_json(p.cell_area)},
                        {"euler_char", p.euler_char},
                        {"inner_radius", number_json(p.inner_radius)},
                        {"boundary_length", number_json(p.boundary_length)},
                        {"diameter", number_json(p.diameter)}};
    j["lambda"] = r.has_energy ? number_json(p.lambda) : nlohmann::json(nullptr);
    parts.push_back(j);
  }
  nlohmann::json j = {{"k", r.k},
                      {"h", number_json(r.h)},
                      {"domain", to_json(r.domain)},
                      {"parts", parts},
                      {"strong", r.strong},
                      {"euler_residual", r.euler_residual},
                      {"part_boundary_total", number_json(r.part_boundary_total)},
                      {"tol_eq", number_json(r.tol_eq)}};
  if (r.has_energy) {
    j["energy"] = number_json(r.energy);
    j["mean_energy"] = number_json(r.mean_energy);
    j["min_energy"] = number_json(r.min_energy);
    j["equipartition"] = r.equipartition;
  } else {
    j["energy"] = nullptr;
    j["mean_energy"] = nullptr;
    j["min_energy"] = nullptr;
    j["equipartition"] = nullptr;
  }
  j["graph"] = r.has_graph ? to_json(r.graph) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const CourantScan& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"k", r.k},
                    {"index_bound", r.index_bound},
                    {"mu", r.mu},
                    {"lambda", number_json(r.lambda)},
                    {"ratio", number_json(r.ratio)},
                    {"violation", r.violation}});
  return {{"violations", s.violations},
          {"max_ratio", number_json(s.max_ratio)},
          {"pleijel_constant", number_json(s.pleijel_constant)},
          {"rows", rows}};
}

nlohmann::json to_json(const LkBracket& b) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : b.runs) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : r.stages) {
      nlohmann::json obj = nlohmann::json::array();
      for (double v : s.objective) obj.push_back(number_json(v));
      stages.push_back({{"exponent", std::isinf(s.exponent) ? nlohmann::json("max") : number_json(s.exponent)},
                        {"objective", obj}});
    }
    runs.push_back({{"seed", r.seed},
                    {"energy", number_json(r.energy)},
                    {"P", number_json(r.P)},
                    {"equipartition", r.equipartition},
                    {"sweeps", r.sweeps},
                    {"reseeds", r.reseeds},
                    {"stages", stages}});
  }
  return {{"k", b.k},
          {"lower", number_json(b.lower)},
          {"upper", number_json(b.upper)},
          {"converged", b.converged},
          {"runs", runs}};
}

nlohmann::json to_json(const HexWitness& w) {
  return {{"a", number_json(w.a)},
          {"k", w.k},
          {"energy", number_json(w.energy)},
          {"energy_per_k", number_json(w.energy_per_k)},
          {"lower_per_k", number_json(w.lower_per_k)},
          {"hexa_per_area", number_json(w.hexa_per_area)},
          {"above_lower", w.above_lower},
          {"within_hexa_trend", w.within_hexa_trend}};
}

nlohmann::json partition_to_json(const KPartition& p) {
  const auto lab = p.labels();
  nlohmann::json runs = nlohmann::json::array();
  int cur = 0, count = 0;
  bool open = false;
  for (CellIndex c : p.grid().inside_cells()) {
    if (open && lab[c] == cur) {
      ++count;
      continue;
    }
    if (open) runs.push_back({cur, count});
    cur = lab[c];
    count = 1;
    open = true;
  }
  if (open) runs.push_back({cur, count});
  return {{"k", p.k()}, {"inside_cells", p.grid().inside_cells().size()}, {"labels_rle", runs}};
}

KPartition partition_from_json(const nlohmann::json& j, const GridPtr& grid) {
  const auto& inside = grid->inside_cells();
  if (!j.contains("labels_rle") || j.value("inside_cells", std::size_t{0}) != inside.size())
    throw Error(ErrorCode::InvalidArgument, "partition_from_json: layout does not match the grid");
  std::vector<int> lab(grid->cell_count(), -2);
  std::size_t t = 0;
  for (const auto& r : j["labels_rle"]) {
    const int l = r.at(0).get<int>();
    const int n = r.at(1).get<int>();
    for (int m = 0; m < n; ++m) {
      if (t >= inside.size()) throw Error(ErrorCode::InvalidArgument, "partition_from_json: too many labels");
      lab[inside[t++]] = l;
    }
  }
  if (t != inside.size()) throw Error(ErrorCode::InvalidArgument, "partition_from_json: too few labels");
  return partition_from_labels(grid, lab);
}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw Error(ErrorCode::InvalidArgument, "CsvTable: row width mismatch");
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t t = 0; t < cells.size(); ++t) {
      if (t) out += ',';
      out += cells[t];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

CsvTable audit_csv(const std::vector<BoundResult>& results) {
  CsvTable t({"name", "status", "kind", "lhs", "rhs", "slack", "tolerance", "inputs_digest"});
  for (const auto& r : results) {
    const bool na = r.status == BoundStatus::NotApplicable;
    t.row({r.name, to_string(r.status), r.kind == BoundResult::Kind::Equality ? "equality" : "inequality",
           na ? "" : format_number(r.lhs), na ? "" : format_number(r.rhs), na ? "" : format_number(r.slack),
           na ? "" : format_number(r.tolerance), r.inputs_digest});
  }
  return t;
}

CsvTable eigenvalue_csv(const std::vector<EigenPair>& pairs, const std::vector<double>& reference) {
  const bool ref = !reference.empty();
  std::vector<std::string> header{"index", "lambda", "residual"};
  if (ref) {
    header.push_back("reference");
    header.push_back("relative_error");
  }
  CsvTable t(header);
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    std::vector<std::string> row{std::to_string(n + 1), format_number(pairs[n].value), format_number(pairs[n].residual)};
    if (ref) {
      const double r = n < reference.size() ? reference[n] : std::nan("");
      row.push_back(format_number(r));
      row.push_back(format_number(std::abs(pairs[n].value - r) / std::abs(r)));
    }
    t.row(row);
  }
  return t;
}

CsvTable eigenvector_csv(const DirichletOperator& op, const std::vector<EigenPair>& pairs) {
  std::vector<std::string> header{"x", "y"};
  for (std::size_t n = 0; n < pairs.size(); ++n) header.push_back("u" + std::to_string(n + 1));
  CsvTable t(header);
  const DomainGrid& g = op.subdomain().grid();
  for (std::size_t d = 0; d < op.dof_count(); ++d) {
    const Point c = g.center(op.cell(static_cast<std::int32_t>(d)));
    std::vector<std::string> row{format_number(c.x), format_number(c.y)};
    for (const auto& p : pairs) row.push_back(format_number(p.vector[d]));
    t.row(row);
  }
  return t;
}

nlohmann::json eigenpair_header(const DirichletOperator& op, const std::vector<EigenPair>& pairs) {
  const DomainGrid& g = op.subdomain().grid();
  nlohmann::json values = nlohmann::json::array(), residuals = nlohmann::json::array();
  for (const auto& p : pairs) {
    values.push_back(number_json(p.value));
    residuals.push_back(number_json(p.residual));
  }
  return {{"h", number_json(g.h())},
          {"dof_count", op.dof_count()},
          {"count", pairs.size()},
          {"normalization", "sum u^2 h^2 = 1"},
          {"values", values},
          {"residuals", residuals}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

} // namespace plab
