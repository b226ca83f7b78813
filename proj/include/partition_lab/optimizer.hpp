#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "partition_lab/partition.hpp"

namespace plab {

inline constexpr double kMaxNorm = std::numeric_limits<double>::infinity();

struct OptimizerConfig {
  int k = 2;
  std::uint64_t seed = 1;
  int max_outer_iters = 200;
  /// Ascending exponents; an infinite last entry means max-energy acceptance.
  std::vector<double> p_schedule{1.0, 2.0, 4.0, 8.0, kMaxNorm};
  double tol_energy = 1e-4;
  int restarts = 5;
  double tol_eq = 0.05;
  SolverOptions solver;
  /// When non-empty, accepted partitions are written here and resumed from.
  std::string checkpoint_dir;

  /// Throws InvalidConfig.
  void validate() const;
};

/// Voronoi cells of k farthest-point-sampled centers refined by a few Lloyd
/// steps; covers every inside cell. Throws TooManyParts.
KPartition seed_partition(const GridPtr& grid, int k, std::uint64_t seed);

/// (sum lambda_j^p)^(1/p), or the max for p = kMaxNorm.
double p_energy(std::span<const double> energies, double p);

/// One reassignment sweep by weighted ground-state strength.
/// Throws ReseedRequired when a part vanishes.
KPartition relax_step(const KPartition& p, double exponent, const SolverOptions& opt = {});

struct StageTrace {
  double exponent = 1.0;
  std::vector<double> objective;  // accepted values, first is the start
};

struct SeedRun {
  std::uint64_t seed = 0;
  double energy = 0.0;
  double P = 0.0;
  bool equipartition = false;
  int sweeps = 0;
  int reseeds = 0;
  std::vector<StageTrace> stages;
};

struct LkBracket {
  int k = 0;
  double lower = 0.0;
  double upper = 0.0;
  /// False when no run ended within the equipartition tolerance.
  bool converged = false;
  std::optional<KPartition> best_partition;
  std::vector<SeedRun> runs;
};

LkBracket minimize(const GridPtr& grid, const OptimizerConfig& cfg);

struct TrendRow {
  int k = 0;
  double lower_per_k = 0.0;
  double upper_per_k = 0.0;
  bool converged = false;
  bool monotone = true;  // upper(k) >= upper(k-1) / 1.02
};

struct HexWitness {
  double a = 0.0;
  int k = 0;
  double energy = 0.0;
  double energy_per_k = 0.0;
  double lower_per_k = 0.0;     // pi j^2 / A
  double hexa_per_area = 0.0;   // lambda(Hexa_1) / A
  bool above_lower = false;
  bool within_hexa_trend = false;  // energy_per_k <= 1.05 hexa_per_area
};

struct LkTrend {
  std::vector<TrendRow> rows;
  std::vector<HexWitness> witnesses;
  std::vector<LkBracket> brackets;
};

HexWitness hex_witness(const GridPtr& grid, double a, const SolverOptions& opt = {});

/// Brackets for each k (ascending) plus hexagonal witnesses at the given cell areas.
LkTrend lk_trend(const GridPtr& grid, const std::vector<int>& k_list, const OptimizerConfig& cfg,
                 const std::vector<double>& hex_areas = {});

} // namespace plab
