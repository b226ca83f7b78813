#include "partition_lab/partition_lab.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <optional>
#include <string>

#include "partition_lab/bounds.hpp"
#include "partition_lab/errors.hpp"
#include "partition_lab/optimizer.hpp"
#include "partition_lab/parallel.hpp"
#include "partition_lab/runner.hpp"
#include "partition_lab/serialize.hpp"
#include "partition_lab/svg.hpp"

struct plab_domain {
  plab::ShapeSpec shape;
  plab::GridPtr grid;
};

struct plab_partition {
  plab::KPartition partition;
};

namespace {

thread_local std::string last_error;

plab_status fail(plab_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

plab_status status_of(plab::ErrorCode c) { return static_cast<plab_status>(static_cast<int>(c)); }

template <class F>
plab_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return PLAB_OK;
  } catch (const plab::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(PLAB_INVALID_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(PLAB_INTERNAL, e.what());
  } catch (...) {
    return fail(PLAB_INTERNAL, "unknown exception");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define PLAB_CHECK_ARG(cond)                                          \
  if (!(cond)) return fail(PLAB_INVALID_ARGUMENT, "invalid argument: " #cond)

} // namespace

extern "C" {

const char* plab_status_string(plab_status s) {
  if (s == PLAB_OK) return "ok";
  if (s == PLAB_INTERNAL) return "internal";
  if (s >= PLAB_INVALID_ARGUMENT && s <= PLAB_HARD_ASSERTION) return plab::to_string(static_cast<plab::ErrorCode>(s));
  return "unknown";
}

const char* plab_last_error(void) { return last_error.c_str(); }

const char* plab_version(void) { return "1.0.0"; }

void plab_set_threads(int n) { plab::set_thread_limit(n > 0 ? n : 0); }

void plab_string_free(char* s) { std::free(s); }

plab_status plab_domain_create(const char* shape_json, double resolution, plab_domain** out) {
  PLAB_CHECK_ARG(shape_json && out && resolution > 0.0);
  *out = nullptr;
  return guarded([&] {
    auto d = std::make_unique<plab_domain>();
    d->shape = plab::shape_from_json(nlohmann::json::parse(shape_json));
    d->grid = plab::build_domain(d->shape, resolution);
    *out = d.release();
  });
}

void plab_domain_destroy(plab_domain* d) { delete d; }

plab_status plab_domain_cell_count(const plab_domain* d, size_t* inside) {
  PLAB_CHECK_ARG(d && inside);
  *inside = d->grid->inside_cells().size();
  return PLAB_OK;
}

plab_status plab_domain_measure(const plab_domain* d, double* area, double* boundary_length, double* inner_radius,
                                int* euler_char) {
  PLAB_CHECK_ARG(d);
  return guarded([&] {
    const auto g = plab::measure(plab::whole_domain(d->grid));
    if (area) *area = g.area;
    if (boundary_length) *boundary_length = g.boundary_length;
    if (inner_radius) *inner_radius = g.inner_radius;
    if (euler_char) *euler_char = g.euler_char;
  });
}

plab_status plab_eigenvalues(const plab_domain* d, int m, double tol, double* values) {
  PLAB_CHECK_ARG(d && values && m >= 1);
  return guarded([&] {
    plab::SolverOptions o;
    if (tol > 0.0) o.tol = tol;
    const auto pairs = plab::lowest_eigenpairs(plab::assemble_dirichlet(plab::whole_domain(d->grid)), m, o);
    for (int n = 0; n < m; ++n) values[n] = pairs[static_cast<std::size_t>(n)].value;
  });
}

plab_status plab_partition_nodal_product(const plab_domain* d, int p, int q, plab_partition** out) {
  PLAB_CHECK_ARG(d && out && p >= 1 && q >= 1);
  *out = nullptr;
  if (d->shape.kind != plab::ShapeSpec::Kind::Rectangle)
    return fail(PLAB_INVALID_ARGUMENT, "nodal products need a rectangle domain");
  return guarded([&] {
    const auto& s = d->shape;
    const auto u = plab::sample_product(*d->grid, p, q, s.anchor, s.width, s.height);
    const auto r = plab::extract_nodal_partition(u, d->grid);
    *out = new plab_partition{plab::nodal_partition(r, d->grid)};
  });
}

plab_status plab_partition_hexagonal(const plab_domain* d, double cell_area, plab_partition** out) {
  PLAB_CHECK_ARG(d && out && cell_area > 0.0);
  *out = nullptr;
  return guarded([&] { *out = new plab_partition{plab::cover_view(plab::hexagonal_partition(d->grid, cell_area))}; });
}

plab_status plab_partition_optimize(const plab_domain* d, int k, uint64_t seed, const char* options_json,
                                    double* lower, double* upper, plab_partition** out) {
  PLAB_CHECK_ARG(d && k >= 1);
  if (out) *out = nullptr;
  return guarded([&] {
    plab::OptimizerConfig cfg;
    cfg.k = k;
    cfg.seed = seed;
    if (options_json) {
      const auto j = nlohmann::json::parse(options_json);
      cfg.restarts = j.value("restarts", cfg.restarts);
      cfg.max_outer_iters = j.value("max_outer_iters", cfg.max_outer_iters);
      cfg.tol_energy = j.value("tol_energy", cfg.tol_energy);
      cfg.tol_eq = j.value("tol_eq", cfg.tol_eq);
      if (j.contains("p_schedule")) {
        cfg.p_schedule.clear();
        for (const auto& e : j["p_schedule"]) cfg.p_schedule.push_back(e.is_string() ? plab::kMaxNorm : e.get<double>());
      }
    }
    auto b = plab::minimize(d->grid, cfg);
    if (lower) *lower = b.lower;
    if (upper) *upper = b.upper;
    if (out) *out = new plab_partition{std::move(*b.best_partition)};
  });
}

void plab_partition_destroy(plab_partition* p) { delete p; }

int plab_partition_k(const plab_partition* p) { return p ? p->partition.k() : 0; }

plab_status plab_partition_report_json(const plab_partition* p, double tol_eq, int with_energy, char** json) {
  PLAB_CHECK_ARG(p && json && tol_eq >= 0.0);
  *json = nullptr;
  return guarded([&] {
    plab::ReportOptions o;
    o.tol_eq = tol_eq;
    o.eigen = with_energy != 0;
    *json = copy_string(plab::dump(plab::to_json(plab::partition_report(p->partition, o))));
  });
}

plab_status plab_partition_audit_json(const plab_partition* p, double tol_eq, char** json) {
  PLAB_CHECK_ARG(p && json && tol_eq >= 0.0);
  *json = nullptr;
  return guarded([&] {
    plab::ReportOptions o;
    o.tol_eq = tol_eq;
    plab::AuditInput in;
    in.partition = plab::partition_report(p->partition, o);
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : plab::audit_all(in)) a.push_back(plab::to_json(r));
    *json = copy_string(plab::dump(a));
  });
}

plab_status plab_partition_svg(const plab_partition* p, char** svg) {
  PLAB_CHECK_ARG(p && svg);
  *svg = nullptr;
  return guarded([&] {
    plab::ReportOptions o;
    o.eigen = false;
    *svg = copy_string(plab::render_partition_svg(p->partition, plab::partition_report(p->partition, o)));
  });
}

int plab_bound_count(void) { return static_cast<int>(plab::bound_registry().size()); }

const char* plab_bound_name(int i) {
  const auto& r = plab::bound_registry();
  return i >= 0 && static_cast<std::size_t>(i) < r.size() ? r[static_cast<std::size_t>(i)].c_str() : nullptr;
}

plab_status plab_run(const char* config_path, const char* out_dir, long long seed, int threads, int* exit_code,
                     char** message) {
  PLAB_CHECK_ARG(config_path && exit_code);
  if (message) *message = nullptr;
  return guarded([&] {
    plab::RunOptions o;
    o.config_path = config_path;
    if (out_dir) o.out_dir = out_dir;
    if (seed >= 0) o.seed = static_cast<std::uint64_t>(seed);
    o.threads = threads;
    const auto r = plab::run_experiment(o, std::cout);
    std::cout.flush();
    *exit_code = r.exit_code;
    if (message) *message = copy_string(r.message);
  });
}

} // extern "C"
