#include "partition_lab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "partition_lab/constants.hpp"
#include "partition_lab/errors.hpp"
#include "partition_lab/parallel.hpp"

namespace plab {

namespace {

constexpr int kDi[4] = {1, 0, -1, 0};
constexpr int kDj[4] = {0, 1, 0, -1};
constexpr double kMaxNormWeightExponent = 16.0;

template <class F>
void for_neighbors(const DomainGrid& g, CellIndex c, F&& f) {
  const int i = g.col(c), j = g.row(c);
  for (int d = 0; d < 4; ++d)
    if (g.inside(i + kDi[d], j + kDj[d])) f(g.index(i + kDi[d], j + kDj[d]));
}

// Keep the largest 4-connected piece of every label, then grow the kept
// pieces into the freed cells. `score` picks among competing neighbors.
void repair(const DomainGrid& g, std::vector<int>& lab, const std::vector<double>& score, int k) {
  std::vector<int> comp(g.cell_count(), -1);
  std::vector<std::size_t> best_size(static_cast<std::size_t>(k), 0);
  std::vector<int> best_comp(static_cast<std::size_t>(k), -1);
  std::vector<CellIndex> stack;
  int ncomp = 0;
  for (CellIndex c : g.inside_cells()) {
    if (lab[c] < 0 || comp[c] >= 0) continue;
    const int l = lab[c];
    std::size_t size = 0;
    stack.assign(1, c);
    comp[c] = ncomp;
    while (!stack.empty()) {
      const CellIndex a = stack.back();
      stack.pop_back();
      ++size;
      for_neighbors(g, a, [&](CellIndex b) {
        if (lab[b] == l && comp[b] < 0) {
          comp[b] = ncomp;
          stack.push_back(b);
        }
      });
    }
    if (size > best_size[static_cast<std::size_t>(l)]) {
      best_size[static_cast<std::size_t>(l)] = size;
      best_comp[static_cast<std::size_t>(l)] = ncomp;
    }
    ++ncomp;
  }
  for (CellIndex c : g.inside_cells())
    if (lab[c] >= 0 && comp[c] != best_comp[static_cast<std::size_t>(lab[c])]) lab[c] = -1;

  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> next = lab;
    for (CellIndex c : g.inside_cells()) {
      if (lab[c] >= 0) continue;
      int pick = -1;
      double pick_score = -std::numeric_limits<double>::infinity();
      for_neighbors(g, c, [&](CellIndex b) {
        if (lab[b] < 0) return;
        if (score[b] > pick_score || (score[b] == pick_score && lab[b] < pick)) {
          pick = lab[b];
          pick_score = score[b];
        }
      });
      if (pick >= 0) {
        next[c] = pick;
        changed = true;
      }
    }
    lab.swap(next);
  }
}

std::vector<int> present_labels(const DomainGrid& g, const std::vector<int>& lab, int k) {
  std::vector<int> count(static_cast<std::size_t>(k), 0);
  for (CellIndex c : g.inside_cells())
    if (lab[c] >= 0) ++count[static_cast<std::size_t>(lab[c])];
  return count;
}

std::vector<EigenPair> part_states(const KPartition& p, const SolverOptions& opt) {
  std::vector<EigenPair> states(p.parts().size());
  parallel_for(states.size(), [&](std::size_t j) { states[j] = ground_state(p.parts()[j], opt); });
  return states;
}

std::vector<double> energies_of(const std::vector<EigenPair>& states) {
  std::vector<double> e;
  for (const auto& s : states) e.push_back(s.value);
  return e;
}

struct Reassigned {
  std::vector<int> labels;
  std::vector<double> score;
  std::vector<double> margin;  // winning strength minus the current label's
};

// Each u_j is extended one cell past its part by the largest adjacent value
// (a one-stencil max filter), so fronts can move; cells go to the largest
// weighted extension.
Reassigned reassign(const KPartition& p, const std::vector<EigenPair>& states, double exponent) {
  const DomainGrid& g = p.grid();
  const int k = p.k();
  double lmax = 0.0;
  for (const auto& s : states) lmax = std::max(lmax, s.value);
  const double pe = std::isinf(exponent) ? kMaxNormWeightExponent : exponent;
  std::vector<double> w(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) w[j] = std::pow(states[j].value / lmax, 0.5 * (pe - 1.0));

  std::vector<int> lab = p.labels();
  std::vector<double> val(g.cell_count(), 0.0);
  for (int j = 0; j < k; ++j) {
    const auto& cells = p.parts()[j].cells();
    for (std::size_t d = 0; d < cells.size(); ++d) val[cells[d]] = w[j] * std::abs(states[j].vector[d]);
  }

  Reassigned out{lab, std::vector<double>(g.cell_count(), 0.0), std::vector<double>(g.cell_count(), 0.0)};
  for (CellIndex c : g.inside_cells()) {
    int cand[5];
    int nc = 0;
    if (lab[c] >= 0) cand[nc++] = lab[c];
    for_neighbors(g, c, [&](CellIndex b) {
      if (lab[b] >= 0 && std::find(cand, cand + nc, lab[b]) == cand + nc) cand[nc++] = lab[b];
    });
    int best = lab[c];
    double best_s = 0.0, own = 0.0;
    for (int t = 0; t < nc; ++t) {
      const int l = cand[t];
      double s = 0.0;
      if (lab[c] == l) {
        s = val[c];
      } else {
        for_neighbors(g, c, [&](CellIndex b) {
          if (lab[b] == l) s = std::max(s, val[b]);
        });
      }
      if (l == lab[c]) own = s;
      if (s > best_s || (s == best_s && l != lab[c] && best != lab[c] && l < best)) {
        best = l;
        best_s = s;
      }
    }
    out.labels[c] = best;
    out.score[c] = best_s;
    out.margin[c] = best_s - own;
  }
  return out;
}

// Apply the `fraction` of label changes with the largest margins.
std::vector<int> damped(const DomainGrid& g, const std::vector<int>& cur, const Reassigned& r, double fraction, int k) {
  std::vector<CellIndex> changed;
  for (CellIndex c : g.inside_cells())
    if (r.labels[c] != cur[c]) changed.push_back(c);
  std::stable_sort(changed.begin(), changed.end(), [&](CellIndex a, CellIndex b) { return r.margin[a] > r.margin[b]; });
  const auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(changed.size())));
  std::vector<int> lab = cur;
  for (std::size_t t = 0; t < keep && t < changed.size(); ++t) lab[changed[t]] = r.labels[changed[t]];
  repair(g, lab, r.score, k);
  return lab;
}

bool all_present(const std::vector<int>& counts) {
  return std::all_of(counts.begin(), counts.end(), [](int n) { return n > 0; });
}

// Give every vanished label a small block at the deepest point of the
// lowest-energy part.
void reseed(const DomainGrid& g, std::vector<int>& lab, const std::vector<double>& energies, int k) {
  auto counts = present_labels(g, lab, k);
  for (int missing = 0; missing < k; ++missing) {
    if (counts[static_cast<std::size_t>(missing)] > 0) continue;
    int donor = -1;
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] < 2) continue;
      if (donor < 0 || energies[static_cast<std::size_t>(j)] < energies[static_cast<std::size_t>(donor)]) donor = j;
    }
    if (donor < 0) throw Error(ErrorCode::ReseedRequired, "reseed: no part large enough to split");
    std::vector<std::uint8_t> member(g.cell_count(), 0);
    for (CellIndex c : g.inside_cells()) member[c] = lab[c] == donor;
    const auto dist = distance_to_complement(g, member);
    CellIndex deep = -1;
    for (CellIndex c : g.inside_cells())
      if (member[c] && (deep < 0 || dist[c] > dist[deep])) deep = c;
    const int i0 = g.col(deep), j0 = g.row(deep);
    const int r = dist[deep] > 2.5 * g.h() ? 1 : 0;
    for (int dj = -r; dj <= r; ++dj)
      for (int di = -r; di <= r; ++di)
        if (g.inside(i0 + di, j0 + dj) && lab[g.index(i0 + di, j0 + dj)] == donor)
          lab[g.index(i0 + di, j0 + dj)] = missing;
    counts = present_labels(g, lab, k);
  }
}

std::filesystem::path checkpoint_path(const OptimizerConfig& cfg, std::uint64_t seed) {
  return std::filesystem::path(cfg.checkpoint_dir) /
         ("checkpoint_k" + std::to_string(cfg.k) + "_seed" + std::to_string(seed) + ".json");
}

struct Checkpoint {
  int stage = 0;
  bool done = false;
  int sweeps = 0;
  std::vector<int> labels;
};

void write_checkpoint(const OptimizerConfig& cfg, std::uint64_t seed, const DomainGrid& g,
                      const std::vector<int>& lab, int stage, bool done, int sweeps) {
  if (cfg.checkpoint_dir.empty()) return;
  nlohmann::json j;
  j["k"] = cfg.k;
  j["seed"] = seed;
  j["stage"] = stage;
  j["done"] = done;
  j["sweeps"] = sweeps;
  std::vector<int> inside;
  inside.reserve(g.inside_cells().size());
  for (CellIndex c : g.inside_cells()) inside.push_back(lab[c]);
  j["labels"] = inside;
  std::filesystem::create_directories(cfg.checkpoint_dir);
  const auto path = checkpoint_path(cfg, seed);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorCode::Io, "cannot write checkpoint " + tmp);
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

std::optional<Checkpoint> read_checkpoint(const OptimizerConfig& cfg, std::uint64_t seed, const DomainGrid& g) {
  if (cfg.checkpoint_dir.empty()) return std::nullopt;
  std::ifstream in(checkpoint_path(cfg, seed));
  if (!in) return std::nullopt;
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || j.value("k", -1) != cfg.k) return std::nullopt;
  const auto inside = j.value("labels", std::vector<int>{});
  if (inside.size() != g.inside_cells().size()) return std::nullopt;
  Checkpoint cp;
  cp.stage = j.value("stage", 0);
  cp.done = j.value("done", false);
  cp.sweeps = j.value("sweeps", 0);
  cp.labels.assign(g.cell_count(), -2);
  for (std::size_t t = 0; t < inside.size(); ++t) {
    if (inside[t] < 0 || inside[t] >= cfg.k) return std::nullopt;
    cp.labels[g.inside_cells()[t]] = inside[t];
  }
  return cp;
}

struct RunOutcome {
  SeedRun run;
  std::optional<KPartition> partition;
};

RunOutcome run_seed(const GridPtr& grid, const OptimizerConfig& cfg, std::uint64_t seed) {
  const DomainGrid& g = *grid;
  const int k = cfg.k;
  RunOutcome out;
  out.run.seed = seed;

  int stage0 = 0;
  KPartition cur = [&] {
    if (auto cp = read_checkpoint(cfg, seed, g)) {
      stage0 = cp->done ? static_cast<int>(cfg.p_schedule.size()) : cp->stage;
      out.run.sweeps = cp->sweeps;
      return partition_from_labels(grid, cp->labels);
    }
    return seed_partition(grid, k, seed);
  }();

  auto states = part_states(cur, cfg.solver);
  for (int s = stage0; s < static_cast<int>(cfg.p_schedule.size()) && k > 1; ++s) {
    const double p = cfg.p_schedule[static_cast<std::size_t>(s)];
    StageTrace trace;
    trace.exponent = p;
    double F = p_energy(energies_of(states), p);
    trace.objective.push_back(F);
    int small = 0;
    for (int it = 0; it < cfg.max_outer_iters; ++it) {
      const auto cur_labels = cur.labels();
      const auto proposal = reassign(cur, states, p);
      bool accepted = false;
      double rel = 0.0;
      for (double fraction = 1.0; fraction >= 1.0 / 16.0 && !accepted; fraction *= 0.5) {
        auto lab = damped(g, cur_labels, proposal, fraction, k);
        if (!all_present(present_labels(g, lab, k))) {
          reseed(g, lab, energies_of(states), k);
          repair(g, lab, proposal.score, k);
          if (!all_present(present_labels(g, lab, k))) continue;
          ++out.run.reseeds;
        }
        if (lab == cur_labels) break;
        KPartition cand = partition_from_labels(grid, lab);
        auto cand_states = part_states(cand, cfg.solver);
        const double Fc = p_energy(energies_of(cand_states), p);
        ++out.run.sweeps;
        if (!(Fc < F)) continue;
        rel = (F - Fc) / F;
        cur = std::move(cand);
        states = std::move(cand_states);
        F = Fc;
        accepted = true;
      }
      if (!accepted) break;
      trace.objective.push_back(F);
      write_checkpoint(cfg, seed, g, cur.labels(), s, false, out.run.sweeps);
      small = rel < cfg.tol_energy ? small + 1 : 0;
      if (small >= 3) break;
    }
    out.run.stages.push_back(std::move(trace));
    write_checkpoint(cfg, seed, g, cur.labels(), s + 1, false, out.run.sweeps);
  }
  write_checkpoint(cfg, seed, g, cur.labels(), static_cast<int>(cfg.p_schedule.size()), true, out.run.sweeps);

  ReportOptions ro;
  ro.tol_eq = cfg.tol_eq;
  ro.solver = cfg.solver;
  const auto rep = partition_report(cur, ro);
  out.run.energy = rep.energy;
  out.run.P = rep.has_graph ? rep.graph.P : std::numeric_limits<double>::infinity();
  out.run.equipartition = rep.equipartition;
  out.partition = std::move(cur);
  return out;
}

} // namespace

void OptimizerConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "optimizer: k must be >= 1");
  if (max_outer_iters < 1) throw Error(ErrorCode::InvalidConfig, "optimizer: max_outer_iters must be >= 1");
  if (restarts < 1) throw Error(ErrorCode::InvalidConfig, "optimizer: restarts must be >= 1");
  if (p_schedule.empty()) throw Error(ErrorCode::InvalidConfig, "optimizer: empty p_schedule");
  for (std::size_t t = 0; t < p_schedule.size(); ++t) {
    if (!(p_schedule[t] >= 1.0)) throw Error(ErrorCode::InvalidConfig, "optimizer: exponents must be >= 1");
    if (t > 0 && !(p_schedule[t] > p_schedule[t - 1]))
      throw Error(ErrorCode::InvalidConfig, "optimizer: p_schedule must be ascending");
  }
  if (!(tol_energy > 0.0)) throw Error(ErrorCode::InvalidConfig, "optimizer: tol_energy must be > 0");
  if (!(tol_eq >= 0.0)) throw Error(ErrorCode::InvalidConfig, "optimizer: tol_eq must be >= 0");
}

double p_energy(std::span<const double> energies, double p) {
  if (energies.empty()) return 0.0;
  if (std::isinf(p)) return *std::max_element(energies.begin(), energies.end());
  double s = 0.0;
  for (double e : energies) s += std::pow(e, p);
  return std::pow(s, 1.0 / p);
}

KPartition seed_partition(const GridPtr& grid, int k, std::uint64_t seed) {
  const DomainGrid& g = *grid;
  const auto& inside = g.inside_cells();
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "seed_partition: k must be >= 1");
  if (static_cast<std::size_t>(k) > inside.size())
    throw Error(ErrorCode::TooManyParts, "seed_partition: k exceeds the number of inside cells");
  if (k == 1) return KPartition(grid, {whole_domain(grid)});

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, inside.size() - 1);
  std::vector<Point> centers{g.center(inside[pick(rng)])};
  std::vector<double> d2(inside.size(), std::numeric_limits<double>::infinity());
  auto sq = [](Point a, Point b) { return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y); };
  while (static_cast<int>(centers.size()) < k) {
    std::size_t far = 0;
    for (std::size_t t = 0; t < inside.size(); ++t) {
      d2[t] = std::min(d2[t], sq(g.center(inside[t]), centers.back()));
      if (d2[t] > d2[far]) far = t;
    }
    centers.push_back(g.center(inside[far]));
  }

  std::vector<int> owner(inside.size(), 0);
  auto assign = [&] {
    for (std::size_t t = 0; t < inside.size(); ++t) {
      const Point c = g.center(inside[t]);
      int best = 0;
      for (int j = 1; j < k; ++j)
        if (sq(c, centers[j]) < sq(c, centers[best])) best = j;
      owner[t] = best;
    }
  };
  constexpr int kLloydSteps = 5;
  for (int step = 0; step < kLloydSteps; ++step) {
    assign();
    std::vector<Point> sum(static_cast<std::size_t>(k));
    std::vector<int> n(static_cast<std::size_t>(k), 0);
    for (std::size_t t = 0; t < inside.size(); ++t) {
      sum[owner[t]] = sum[owner[t]] + g.center(inside[t]);
      ++n[owner[t]];
    }
    for (int j = 0; j < k; ++j) {
      if (n[j] == 0) continue;
      const Point m = (1.0 / n[j]) * sum[j];
      // Snap to the nearest owned cell so centers stay inside the domain.
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < inside.size(); ++t) {
        if (owner[t] != j) continue;
        const double d = sq(g.center(inside[t]), m);
        if (d < best) {
          best = d;
          centers[j] = g.center(inside[t]);
        }
      }
    }
  }
  assign();

  std::vector<int> lab(g.cell_count(), -2);
  for (std::size_t t = 0; t < inside.size(); ++t) lab[inside[t]] = owner[t];
  repair(g, lab, std::vector<double>(g.cell_count(), 0.0), k);
  if (!all_present(present_labels(g, lab, k)))
    throw Error(ErrorCode::TooManyParts, "seed_partition: could not place k connected parts");
  return partition_from_labels(grid, lab);
}

KPartition relax_step(const KPartition& p, double exponent, const SolverOptions& opt) {
  if (p.k() == 1) return p;
  const auto states = part_states(p, opt);
  auto next = reassign(p, states, exponent);
  repair(p.grid(), next.labels, next.score, p.k());
  if (!all_present(present_labels(p.grid(), next.labels, p.k())))
    throw Error(ErrorCode::ReseedRequired, "relax_step: a part vanished");
  return partition_from_labels(p.grid_ptr(), next.labels);
}

LkBracket minimize(const GridPtr& grid, const OptimizerConfig& cfg) {
  cfg.validate();
  if (static_cast<std::size_t>(cfg.k) > grid->inside_cells().size())
    throw Error(ErrorCode::TooManyParts, "minimize: k exceeds the number of inside cells");
  const double area = measure(whole_domain(grid)).area;

  std::vector<RunOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  parallel_for(outcomes.size(), [&](std::size_t r) { outcomes[r] = run_seed(grid, cfg, cfg.seed + r); });

  LkBracket b;
  b.k = cfg.k;
  b.lower = constants().pi_j_sq * cfg.k / area;
  int best = -1;
  auto better = [&](const SeedRun& a, const SeedRun& c) {
    const double scale = std::max(std::abs(a.energy), std::abs(c.energy));
    if (std::abs(a.energy - c.energy) <= 1e-9 * scale) return a.P < c.P;
    return a.energy < c.energy;
  };
  for (int pass = 0; pass < 2 && best < 0; ++pass) {
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
      const auto& run = outcomes[r].run;
      if (pass == 0 && !run.equipartition) continue;
      if (best < 0 || better(run, outcomes[static_cast<std::size_t>(best)].run)) best = static_cast<int>(r);
    }
    b.converged = pass == 0 && best >= 0;
  }
  b.upper = outcomes[static_cast<std::size_t>(best)].run.energy;
  b.best_partition = std::move(outcomes[static_cast<std::size_t>(best)].partition);
  for (auto& o : outcomes) b.runs.push_back(std::move(o.run));
  if (!(b.lower <= b.upper))
    throw Error(ErrorCode::HardAssertion, "minimize: bracket lower bound exceeds the upper bound");
  return b;
}

HexWitness hex_witness(const GridPtr& grid, double a, const SolverOptions& opt) {
  const KPartition tiling = hexagonal_partition(grid, a);
  const auto states = part_states(tiling, opt);
  const double area = measure(whole_domain(grid)).area;
  HexWitness w;
  w.a = a;
  w.k = tiling.k();
  for (const auto& s : states) w.energy = std::max(w.energy, s.value);
  w.energy_per_k = w.energy / w.k;
  w.lower_per_k = constants().pi_j_sq / area;
  w.hexa_per_area = constants().lambda_hexa1 / area;
  w.above_lower = w.energy_per_k >= w.lower_per_k;
  w.within_hexa_trend = w.energy_per_k <= 1.05 * w.hexa_per_area;
  if (!w.above_lower)
    throw Error(ErrorCode::HardAssertion, "hex_witness: witness energy below the Faber-Krahn bracket");
  return w;
}

LkTrend lk_trend(const GridPtr& grid, const std::vector<int>& k_list, const OptimizerConfig& cfg,
                 const std::vector<double>& hex_areas) {
  if (!std::is_sorted(k_list.begin(), k_list.end()))
    throw Error(ErrorCode::InvalidConfig, "lk_trend: k_list must be ascending");
  LkTrend t;
  for (int k : k_list) {
    OptimizerConfig c = cfg;
    c.k = k;
    auto b = minimize(grid, c);
    TrendRow row;
    row.k = k;
    row.lower_per_k = b.lower / k;
    row.upper_per_k = b.upper / k;
    row.converged = b.converged;
    if (!t.brackets.empty()) row.monotone = b.upper * 1.02 >= t.brackets.back().upper;
    t.rows.push_back(row);
    t.brackets.push_back(std::move(b));
  }
  for (double a : hex_areas) t.witnesses.push_back(hex_witness(grid, a, cfg.solver));
  return t;
}

} // namespace plab
