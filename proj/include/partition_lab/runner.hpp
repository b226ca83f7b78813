#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "partition_lab/partition.hpp"

namespace plab {

struct RunOptions {
  std::string config_path;
  std::optional<std::string> out_dir;  // overrides the config's "output"
  std::optional<std::uint64_t> seed;   // overrides the config's "seed"
  int threads = 0;                     // 0: PARTITION_LAB_THREADS, then hardware
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 numerical or hard-assertion failure, 2 invalid config
  std::string message;
  std::vector<std::string> outputs;  // file names relative to the output directory
};

/// Schema diagnostics for an experiment config; empty when valid.
std::vector<std::string> validate_config(const nlohmann::json& config);

/// Run one experiment. Summary lines go to `log`.
RunResult run_experiment(const RunOptions& opt, std::ostream& log);
RunResult run_experiment_json(const nlohmann::json& config, const RunOptions& opt, std::ostream& log);

struct Figure {
  std::string name;  // file stem
  const KPartition* partition = nullptr;
  const PartitionReport* report = nullptr;
};

/// One SVG per figure, written into `dir`; returns the file names.
std::vector<std::string> render_figures(const std::vector<Figure>& figures, const std::string& dir);

} // namespace plab
