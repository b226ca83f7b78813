#include "partition_lab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "partition_lab/bounds.hpp"
#include "partition_lab/digest.hpp"
#include "partition_lab/errors.hpp"
#include "partition_lab/nodal.hpp"
#include "partition_lab/optimizer.hpp"
#include "partition_lab/parallel.hpp"
#include "partition_lab/serialize.hpp"
#include "partition_lab/svg.hpp"

namespace plab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Ty { PosInt, NonNegInt, PosNumber, NonNegNumber, Bool, IntList, NumberList, Schedule, Object, String };

struct Param {
  Ty type;
  bool required = false;
};

using Schema = std::map<std::string, Param>;

const Schema kOptimizerParams = {
    {"k", {Ty::PosInt, true}},          {"restarts", {Ty::PosInt}},   {"max_outer_iters", {Ty::PosInt}},
    {"p_schedule", {Ty::Schedule}},     {"tol_energy", {Ty::PosNumber}}, {"tol_eq", {Ty::NonNegNumber}},
    {"checkpoint", {Ty::Bool}},         {"solver_tol", {Ty::PosNumber}},
};

const std::map<std::string, Schema>& task_schemas() {
  static const std::map<std::string, Schema> s = [] {
    std::map<std::string, Schema> m;
    m["spectrum"] = {{"m", {Ty::PosInt}}, {"tol", {Ty::PosNumber}}, {"vectors", {Ty::Bool}}};
    m["nodal_scan"] = {{"K", {Ty::PosInt}}, {"tol", {Ty::PosNumber}}, {"products_max_sum", {Ty::PosInt}}};
    m["partition_audit"] = {{"partition", {Ty::Object, true}}, {"tol_eq", {Ty::NonNegNumber}},
                            {"eigen", {Ty::Bool}},              {"lk_upper", {Ty::PosNumber}},
                            {"tol", {Ty::PosNumber}}};
    m["optimize"] = kOptimizerParams;
    Schema trend = kOptimizerParams;
    trend.erase("k");
    trend["k_list"] = {Ty::IntList, true};
    trend["hex_areas"] = {Ty::NumberList};
    m["lk_trend"] = trend;
    m["hex_witness"] = {{"a", {Ty::PosNumber, true}}, {"eigen", {Ty::Bool}}, {"tol", {Ty::PosNumber}}};
    return m;
  }();
  return s;
}

std::string check_type(const json& v, Ty t) {
  switch (t) {
  case Ty::PosInt:
    return v.is_number_integer() && v.get<long long>() >= 1 ? "" : "must be an integer >= 1";
  case Ty::NonNegInt:
    return v.is_number_integer() && v.get<long long>() >= 0 ? "" : "must be an integer >= 0";
  case Ty::PosNumber:
    return v.is_number() && v.get<double>() > 0.0 ? "" : "must be a number > 0";
  case Ty::NonNegNumber:
    return v.is_number() && v.get<double>() >= 0.0 ? "" : "must be a number >= 0";
  case Ty::Bool:
    return v.is_boolean() ? "" : "must be a boolean";
  case Ty::String:
    return v.is_string() ? "" : "must be a string";
  case Ty::Object:
    return v.is_object() ? "" : "must be an object";
  case Ty::IntList: {
    if (!v.is_array() || v.empty()) return "must be a non-empty array of integers >= 1";
    long long prev = 0;
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long long>() < 1) return "must be a non-empty array of integers >= 1";
      if (e.get<long long>() <= prev) return "must be strictly ascending";
      prev = e.get<long long>();
    }
    return "";
  }
  case Ty::NumberList:
    if (!v.is_array()) return "must be an array of numbers > 0";
    for (const auto& e : v)
      if (!e.is_number() || e.get<double>() <= 0.0) return "must be an array of numbers > 0";
    return "";
  case Ty::Schedule: {
    if (!v.is_array() || v.empty()) return "must be a non-empty array";
    double prev = 0.0;
    for (std::size_t t = 0; t < v.size(); ++t) {
      const auto& e = v[t];
      double x;
      if (e.is_string() && e.get<std::string>() == "max") {
        if (t + 1 != v.size()) return "\"max\" may only be the last entry";
        x = kMaxNorm;
      } else if (e.is_number()) {
        x = e.get<double>();
      } else {
        return "entries must be numbers >= 1 or \"max\"";
      }
      if (!(x >= 1.0)) return "entries must be >= 1";
      if (!(x > prev)) return "must be ascending";
      prev = x;
    }
    return "";
  }
  }
  return "";
}

void validate_partition_spec(const json& p, std::vector<std::string>& diag) {
  const std::string where = "params.partition";
  if (!p.contains("kind") || !p["kind"].is_string()) {
    diag.push_back(where + ".kind: required string");
    return;
  }
  const std::string kind = p["kind"];
  Schema s;
  if (kind == "nodal_product") s = {{"p", {Ty::PosInt, true}}, {"q", {Ty::PosInt, true}}};
  else if (kind == "eigenfunction") s = {{"index", {Ty::PosInt, true}}};
  else if (kind == "hexagonal") s = {{"a", {Ty::PosNumber, true}}, {"cover", {Ty::Bool}}};
  else if (kind != "labels") {
    diag.push_back(where + ".kind: unknown partition kind \"" + kind + "\"");
    return;
  }
  if (kind == "labels") {
    if (!p.contains("labels_rle") || !p["labels_rle"].is_array()) diag.push_back(where + ".labels_rle: required array");
    return;
  }
  for (const auto& [key, val] : p.items()) {
    if (key == "kind") continue;
    const auto it = s.find(key);
    if (it == s.end()) diag.push_back(where + "." + key + ": unknown key");
    else if (auto e = check_type(val, it->second.type); !e.empty()) diag.push_back(where + "." + key + ": " + e);
  }
  for (const auto& [key, par] : s)
    if (par.required && !p.contains(key)) diag.push_back(where + "." + key + ": required");
}

// ---------------------------------------------------------------------------

struct Context {
  json config;
  GridPtr grid;
  ShapeSpec shape;
  std::uint64_t seed = 1;
  fs::path out;
  std::vector<std::string> outputs;
  json assertions = json::array();
  bool failed = false;
  std::string failure;
  std::ostream* log = nullptr;

  const json& params() const {
    static const json empty = json::object();
    return config.contains("params") ? config["params"] : empty;
  }
  template <class T>
  T param(const char* key, T def) const {
    return params().contains(key) ? params()[key].get<T>() : def;
  }
  SolverOptions solver() const {
    SolverOptions o;
    o.tol = param("tol", o.tol);
    o.seed = seed;
    return o;
  }

  void write(const std::string& name, const std::string& text) {
    std::ofstream f(out / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + (out / name).string());
    f << text;
    if (!f) throw Error(ErrorCode::Io, "write failed for " + (out / name).string());
    outputs.push_back(name);
  }
  void assertion(const std::string& name, bool passed, const std::string& detail = {}) {
    assertions.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    if (!passed && !failed) {
      failed = true;
      failure = name + (detail.empty() ? "" : ": " + detail);
    }
  }
};

// Discrete closed-form spectrum of a lattice-aligned rectangle, when it is one.
std::vector<double> rectangle_reference(const ShapeSpec& s, double h, int m) {
  if (s.kind != ShapeSpec::Kind::Rectangle) return {};
  auto lattice = [&](double v) { return std::abs(v / h - std::round(v / h)) < 1e-9; };
  if (!lattice(s.anchor.x) || !lattice(s.anchor.y) || !lattice(s.width) || !lattice(s.height)) return {};
  const int nx = static_cast<int>(std::lround(s.width / h)), ny = static_cast<int>(std::lround(s.height / h));
  std::vector<double> v;
  for (int p = 1; p < nx; ++p)
    for (int q = 1; q < ny; ++q) {
      const double a = std::sin(p * std::numbers::pi / (2.0 * nx)), b = std::sin(q * std::numbers::pi / (2.0 * ny));
      v.push_back(4.0 / (h * h) * (a * a + b * b));
    }
  std::sort(v.begin(), v.end());
  if (static_cast<int>(v.size()) > m) v.resize(static_cast<std::size_t>(m));
  return v;
}

void print_audit(std::ostream& log, const std::vector<BoundResult>& results) {
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %-15s %14s %14s %12s\n", "bound", "status", "lhs", "rhs", "slack");
  log << line;
  for (const auto& r : results) {
    if (r.status == BoundStatus::NotApplicable) {
      std::snprintf(line, sizeof line, "%-20s %-15s %s\n", r.name.c_str(), to_string(r.status), r.note.c_str());
    } else {
      std::snprintf(line, sizeof line, "%-20s %-15s %14.6g %14.6g %12.4g\n", r.name.c_str(), to_string(r.status),
                    r.lhs, r.rhs, r.slack);
    }
    log << line;
  }
}

void task_spectrum(Context& c) {
  const int m = c.param("m", 5);
  const auto op = assemble_dirichlet(whole_domain(c.grid));
  if (static_cast<std::size_t>(m) > op.dof_count())
    throw Error(ErrorCode::InvalidConfig, "params.m exceeds the number of inside cells");
  const auto pairs = lowest_eigenpairs(op, m, c.solver());
  const auto ref = rectangle_reference(c.shape, c.grid->h(), m);
  const auto geo = measure(whole_domain(c.grid));
  json report = {{"task", "spectrum"}, {"domain", to_json(geo)}, {"eigenpairs", eigenpair_header(op, pairs)}};
  json weyl = json::array();
  for (std::size_t n = 0; n < pairs.size(); ++n)
    weyl.push_back(number_json(weyl_ratio(pairs[n].value, geo.area, static_cast<int>(n + 1))));
  report["weyl_ratio"] = weyl;
  if (!ref.empty()) {
    double worst = 0.0;
    for (std::size_t n = 0; n < pairs.size() && n < ref.size(); ++n)
      worst = std::max(worst, std::abs(pairs[n].value - ref[n]) / ref[n]);
    report["closed_form_max_relative_error"] = number_json(worst);
  }
  c.write("spectrum.csv", eigenvalue_csv(pairs, ref).str());
  if (c.param("vectors", false)) c.write("eigenvectors.csv", eigenvector_csv(op, pairs).str());
  c.write("spectrum.report.json", dump(report));
  for (std::size_t n = 0; n < pairs.size(); ++n)
    *c.log << "lambda_" << n + 1 << " = " << format_number(pairs[n].value) << '\n';
}

void task_nodal_scan(Context& c) {
  const int K = c.param("K", 20);
  const auto scan = courant_pleijel_scan(c.grid, K, c.solver());
  CsvTable t({"k", "index_bound", "mu", "lambda", "ratio", "violation"});
  for (const auto& r : scan.rows)
    t.row({std::to_string(r.k), std::to_string(r.index_bound), std::to_string(r.mu), format_number(r.lambda),
           format_number(r.ratio), r.violation ? "1" : "0"});
  c.write("nodal_scan.csv", t.str());
  json report = {{"task", "nodal_scan"}, {"courant", to_json(scan)}};
  if (c.params().contains("products_max_sum")) {
    const auto modes = square_product_modes(c.param("products_max_sum", 0), c.grid);
    CsvTable pt({"p", "q", "index", "multiplicity", "mu_exact", "mu"});
    int bad = 0;
    for (const auto& m : modes) {
      pt.row({std::to_string(m.p), std::to_string(m.q), std::to_string(m.index), std::to_string(m.multiplicity),
              std::to_string(m.mu_exact), std::to_string(m.mu)});
      if (m.mu > m.index) ++bad;
    }
    c.write("products.csv", pt.str());
    report["product_violations"] = bad;
    c.assertion("courant_products", bad == 0, std::to_string(bad) + " product modes with mu > index");
  }
  c.write("nodal_scan.report.json", dump(report));
  c.assertion("courant", scan.violations == 0, std::to_string(scan.violations) + " violations");
  *c.log << "courant violations: " << scan.violations << ", max mu/k = " << format_number(scan.max_ratio) << '\n';
}

void finish_partition(Context& c, const std::string& stem, const KPartition& p, const PartitionReport& rep,
                      const AuditInput& in, json report) {
  const auto audit = audit_all(in);
  report["report"] = to_json(rep);
  json a = json::array();
  for (const auto& r : audit) a.push_back(to_json(r));
  report["audit"] = a;
  report["partition"] = partition_to_json(p);
  c.write(stem + ".report.json", dump(report));
  c.write(stem + "_audit.csv", audit_csv(audit).str());
  for (const auto& f : render_figures({{stem, &p, &rep}}, c.out.string())) c.outputs.push_back(f);
  if (rep.has_graph) c.assertion("euler", rep.euler_residual == 0, "residual " + std::to_string(rep.euler_residual));
  print_audit(*c.log, audit);
}

void task_partition_audit(Context& c) {
  const json& spec = c.params()["partition"];
  const std::string kind = spec["kind"];
  ReportOptions ro;
  ro.tol_eq = c.param("tol_eq", 0.05);
  ro.eigen = c.param("eigen", true);
  ro.solver = c.solver();
  AuditInput in;
  std::optional<KPartition> part;
  json report = {{"task", "partition_audit"}, {"partition_kind", kind}};
  if (kind == "nodal_product") {
    if (c.shape.kind != ShapeSpec::Kind::Rectangle)
      throw Error(ErrorCode::InvalidConfig, "params.partition: nodal_product needs a rectangle domain");
    const int p = spec["p"], q = spec["q"];
    const double lam = std::pow(std::numbers::pi, 2) *
                       (p * p / (c.shape.width * c.shape.width) + q * q / (c.shape.height * c.shape.height));
    auto nr = extract_nodal_partition(sample_product(*c.grid, p, q, c.shape.anchor, c.shape.width, c.shape.height),
                                      c.grid, 0, lam);
    // Smallest spectral index of the product eigenvalue, by enumeration.
    int below = 0;
    const double w = c.shape.width, ht = c.shape.height;
    const int amax = static_cast<int>(std::ceil(w * std::sqrt(lam) / std::numbers::pi)) + 1;
    const int bmax = static_cast<int>(std::ceil(ht * std::sqrt(lam) / std::numbers::pi)) + 1;
    for (int a = 1; a <= amax; ++a)
      for (int b = 1; b <= bmax; ++b)
        if (std::pow(std::numbers::pi, 2) * (a * a / (w * w) + b * b / (ht * ht)) < lam * (1.0 - 1e-12)) ++below;
    in.eigen_index = below + 1;
    report["mu"] = nr.mu;
    report["eigen_index"] = below + 1;
    report["nodal_length"] = number_json(nr.nodal_set.total_length);
    part.emplace(nodal_partition(nr, c.grid));
  } else if (kind == "eigenfunction") {
    const int index = spec["index"];
    const auto op = assemble_dirichlet(whole_domain(c.grid));
    const auto pairs = lowest_eigenpairs(op, index, c.solver());
    const auto u = to_grid_function(op, pairs.back().vector);
    auto nr = extract_nodal_partition(u, c.grid, index, pairs.back().value);
    report["mu"] = nr.mu;
    report["lambda"] = number_json(nr.lambda);
    report["nodal_length"] = number_json(nr.nodal_set.total_length);
    c.assertion("courant", nr.mu <= index, "mu " + std::to_string(nr.mu) + " at index " + std::to_string(index));
    in.eigen_index = index;
    part.emplace(nodal_partition(nr, c.grid));
  } else if (kind == "hexagonal") {
    auto tiling = hexagonal_partition(c.grid, spec["a"].get<double>());
    part.emplace(spec.value("cover", true) ? cover_view(tiling) : tiling);
  } else {
    part.emplace(partition_from_json(spec, c.grid));
  }
  in.partition = partition_report(*part, ro);
  if (c.params().contains("lk_upper")) in.lk_upper = c.param("lk_upper", 0.0);
  finish_partition(c, "partition", *part, in.partition, in, report);
}

OptimizerConfig optimizer_config(const Context& c, int k) {
  OptimizerConfig o;
  o.k = k;
  o.seed = c.seed;
  o.restarts = c.param("restarts", o.restarts);
  o.max_outer_iters = c.param("max_outer_iters", o.max_outer_iters);
  o.tol_energy = c.param("tol_energy", o.tol_energy);
  o.tol_eq = c.param("tol_eq", o.tol_eq);
  o.solver.seed = c.seed;
  o.solver.tol = c.param("solver_tol", o.solver.tol);
  if (c.params().contains("p_schedule")) {
    o.p_schedule.clear();
    for (const auto& e : c.params()["p_schedule"]) o.p_schedule.push_back(e.is_string() ? kMaxNorm : e.get<double>());
  }
  if (c.param("checkpoint", false)) o.checkpoint_dir = (c.out / "checkpoints").string();
  return o;
}

void task_optimize(Context& c) {
  const auto cfg = optimizer_config(c, c.param("k", 1));
  const auto b = minimize(c.grid, cfg);
  c.assertion("bracket", b.lower <= b.upper, "lower " + format_number(b.lower) + " upper " + format_number(b.upper));
  CsvTable t({"k", "lower", "upper", "converged"});
  t.row({std::to_string(b.k), format_number(b.lower), format_number(b.upper), b.converged ? "1" : "0"});
  c.write("bracket.csv", t.str());
  ReportOptions ro;
  ro.tol_eq = cfg.tol_eq;
  ro.solver = cfg.solver;
  AuditInput in;
  in.partition = partition_report(*b.best_partition, ro);
  in.lk_upper = b.upper;
  finish_partition(c, "optimize", *b.best_partition, in.partition, in, {{"task", "optimize"}, {"bracket", to_json(b)}});
  *c.log << "k = " << b.k << ": " << format_number(b.lower) << " <= L_k <= " << format_number(b.upper)
         << (b.converged ? "" : " (unconverged)") << '\n';
}

void task_lk_trend(Context& c) {
  const auto ks = c.params()["k_list"].get<std::vector<int>>();
  const auto areas = c.param("hex_areas", std::vector<double>{});
  const auto cfg = optimizer_config(c, ks.front());
  const auto trend = lk_trend(c.grid, ks, cfg, areas);
  CsvTable t({"k", "lower_per_k", "upper_per_k", "converged", "monotone"});
  json rows = json::array();
  for (std::size_t n = 0; n < trend.rows.size(); ++n) {
    const auto& r = trend.rows[n];
    t.row({std::to_string(r.k), format_number(r.lower_per_k), format_number(r.upper_per_k), r.converged ? "1" : "0",
           r.monotone ? "1" : "0"});
    rows.push_back(to_json(trend.brackets[n]));
    c.assertion("bracket_k" + std::to_string(r.k), r.lower_per_k <= r.upper_per_k);
    *c.log << "k = " << r.k << ": lower/k " << format_number(r.lower_per_k) << ", upper/k "
           << format_number(r.upper_per_k) << '\n';
  }
  c.write("lk_trend.csv", t.str());
  json wit = json::array();
  if (!trend.witnesses.empty()) {
    CsvTable w({"a", "k", "energy", "energy_per_k", "lower_per_k", "hexa_per_area", "within_hexa_trend"});
    for (const auto& x : trend.witnesses) {
      w.row({format_number(x.a), std::to_string(x.k), format_number(x.energy), format_number(x.energy_per_k),
             format_number(x.lower_per_k), format_number(x.hexa_per_area), x.within_hexa_trend ? "1" : "0"});
      wit.push_back(to_json(x));
      c.assertion("hex_witness_a" + format_number(x.a), x.above_lower);
    }
    c.write("hex_witness.csv", w.str());
  }
  c.write("lk_trend.report.json", dump({{"task", "lk_trend"}, {"brackets", rows}, {"witnesses", wit}}));
}

void task_hex_witness(Context& c) {
  const double a = c.param("a", 1.0);
  const auto tiling = hexagonal_partition(c.grid, a);
  const auto cover = cover_view(tiling);
  ReportOptions ro;
  ro.eigen = c.param("eigen", false);
  ro.solver = c.solver();
  AuditInput in;
  in.partition = partition_report(cover, ro);
  const auto& rep = in.partition;
  double capped = 0.0;
  for (const auto& p : rep.parts) capped += std::min(1.0, p.area);
  const double ratio = (rep.graph.P + 0.5 * rep.graph.boundary_length) / (kTwelveQuarter * capped);
  json report = {{"task", "hex_witness"},
                 {"a", number_json(a)},
                 {"hexagon_side", number_json(hexagon_side(a))},
                 {"k", tiling.k()},
                 {"hales_ratio", number_json(ratio)},
                 {"capped_area_sum", number_json(capped)}};
  if (ro.eigen) report["witness"] = to_json(hex_witness(c.grid, a, ro.solver));
  *c.log << "hexagons: " << tiling.k() << ", (P + l/2) / (12^(1/4) sum min(1, A_i)) = " << format_number(ratio) << '\n';
  finish_partition(c, "hex", cover, rep, in, report);
}

const std::map<std::string, std::function<void(Context&)>>& tasks() {
  static const std::map<std::string, std::function<void(Context&)>> t = {
      {"spectrum", task_spectrum},       {"nodal_scan", task_nodal_scan}, {"partition_audit", task_partition_audit},
      {"optimize", task_optimize},       {"lk_trend", task_lk_trend},     {"hex_witness", task_hex_witness},
  };
  return t;
}

int env_threads() {
  const char* v = std::getenv("PARTITION_LAB_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  return (*end == '\0' && n > 0 && n < 4096) ? static_cast<int>(n) : 0;
}

std::string file_digest(const fs::path& p, std::uintmax_t& bytes) {
  std::ifstream f(p, std::ios::binary);
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  bytes = data.size();
  return Fnv1a().text(data).hex();
}

void write_manifest(Context& c, int exit_code, const std::string& message) {
  json outs = json::array();
  std::vector<std::string> files = c.outputs;
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::uintmax_t bytes = 0;
    const auto d = file_digest(c.out / f, bytes);
    outs.push_back({{"file", f}, {"bytes", bytes}, {"fnv1a", d}});
  }
  json m = {{"task", c.config.value("task", "")},
            {"seed", c.seed},
            {"config_digest", Fnv1a().text(c.config.dump()).hex()},
            {"config", c.config},
            {"exit_code", exit_code},
            {"status", exit_code == 0 ? "ok" : exit_code == 2 ? "invalid_config" : "failed"},
            {"message", message},
            {"hard_assertions", c.assertions},
            {"outputs", outs}};
  std::ofstream f(c.out / "manifest.json", std::ios::binary);
  f << dump(m);
}

} // namespace

std::vector<std::string> validate_config(const json& cfg) {
  std::vector<std::string> diag;
  if (!cfg.is_object()) return {"config: must be a JSON object"};
  static const std::set<std::string> top = {"task", "domain", "resolution", "seed", "output", "params", "name"};
  for (const auto& [key, val] : cfg.items())
    if (!top.count(key)) diag.push_back(key + ": unknown key");
  if (!cfg.contains("domain")) {
    diag.push_back("domain: required");
  } else {
    try {
      (void)shape_from_json(cfg["domain"]);
    } catch (const Error& e) {
      diag.push_back(std::string("domain: ") + e.what());
    }
  }
  if (cfg.contains("resolution")) {
    if (auto e = check_type(cfg["resolution"], Ty::PosNumber); !e.empty()) diag.push_back("resolution: " + e);
  }
  if (cfg.contains("seed") && !(cfg["seed"].is_number_integer() && cfg["seed"].get<long long>() >= 0))
    diag.push_back("seed: must be an integer >= 0");
  if (cfg.contains("output") && !cfg["output"].is_string()) diag.push_back("output: must be a string");
  if (!cfg.contains("task") || !cfg["task"].is_string()) {
    diag.push_back("task: required string");
    return diag;
  }
  const auto& schemas = task_schemas();
  const auto it = schemas.find(cfg["task"].get<std::string>());
  if (it == schemas.end()) {
    diag.push_back("task: unknown task \"" + cfg["task"].get<std::string>() + "\"");
    return diag;
  }
  const json params = cfg.value("params", json::object());
  if (!params.is_object()) {
    diag.push_back("params: must be an object");
    return diag;
  }
  for (const auto& [key, val] : params.items()) {
    const auto p = it->second.find(key);
    if (p == it->second.end()) diag.push_back("params." + key + ": unknown key for task " + it->first);
    else if (auto e = check_type(val, p->second.type); !e.empty()) diag.push_back("params." + key + ": " + e);
  }
  for (const auto& [key, p] : it->second)
    if (p.required && !params.contains(key)) diag.push_back("params." + key + ": required for task " + it->first);
  if (it->first == "partition_audit" && params.contains("partition") && params["partition"].is_object())
    validate_partition_spec(params["partition"], diag);
  return diag;
}

std::vector<std::string> render_figures(const std::vector<Figure>& figures, const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& f : figures) {
    const std::string name = f.name + ".svg";
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + name);
    out << render_partition_svg(*f.partition, *f.report);
    files.push_back(name);
  }
  return files;
}

RunResult run_experiment(const RunOptions& opt, std::ostream& log) {
  std::ifstream in(opt.config_path);
  if (!in) return {2, "cannot read config " + opt.config_path, {}};
  const json cfg = json::parse(in, nullptr, false);
  if (cfg.is_discarded()) return {2, "config is not valid JSON: " + opt.config_path, {}};
  return run_experiment_json(cfg, opt, log);
}

RunResult run_experiment_json(const json& config, const RunOptions& opt, std::ostream& log) {
  RunResult result;
  const auto diag = validate_config(config);
  if (!diag.empty()) {
    result.exit_code = 2;
    result.message = "invalid config:";
    for (const auto& d : diag) result.message += "\n  " + d;
    return result;
  }

  Context c;
  c.config = config;
  c.log = &log;
  if (opt.seed) c.config["seed"] = *opt.seed;
  if (opt.out_dir) c.config["output"] = *opt.out_dir;
  c.seed = c.config.value("seed", std::uint64_t{1});
  c.out = c.config.value("output", std::string("out"));

  const int threads = opt.threads > 0 ? opt.threads : env_threads();
  set_thread_limit(threads);

  std::string stage = "setup";
  try {
    fs::create_directories(c.out);
    fs::remove(c.out / "manifest.json");
    c.shape = shape_from_json(c.config["domain"]);
    stage = "build_domain";
    c.grid = build_domain(c.shape, c.config.value("resolution", 64.0));
    stage = c.config["task"].get<std::string>();
    tasks().at(stage)(c);
    if (c.failed) {
      result.exit_code = 1;
      result.message = "hard assertion failed in " + stage + ": " + c.failure;
    }
  } catch (const Error& e) {
    const bool cfg_error = e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::InvalidShape;
    result.exit_code = cfg_error ? 2 : 1;
    result.message = std::string(cfg_error ? "invalid config" : "numerical failure") + " in " + stage + " (" +
                     to_string(e.code()) + "): " + e.what();
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.message = "failure in " + stage + ": " + e.what();
  }
  try {
    if (fs::exists(c.out)) write_manifest(c, result.exit_code, result.message);
    c.outputs.push_back("manifest.json");
  } catch (const std::exception& e) {
    if (result.exit_code == 0) {
      result.exit_code = 1;
      result.message = std::string("cannot write manifest: ") + e.what();
    }
  }
  result.outputs = c.outputs;
  return result;
}

} // namespace plab
