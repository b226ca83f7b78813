#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "partition_lab/partition_lab.h"

int main(int argc, char** argv) {
  CLI::App app{"Spectral partition laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string config;
  std::optional<std::string> out;
  std::optional<long long> seed;
  int threads = 0;
  run->add_option("--config", config, "Experiment JSON file")->required();
  run->add_option("--out", out, "Output directory (overrides the config)");
  run->add_option("--seed", seed, "RNG seed (overrides the config)")->check(CLI::NonNegativeNumber);
  run->add_option("--threads", threads, "Worker threads (default: PARTITION_LAB_THREADS, then all cores)")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  int exit_code = 1;
  char* message = nullptr;
  const plab_status s = plab_run(config.c_str(), out ? out->c_str() : nullptr, seed ? *seed : -1, threads,
                                 &exit_code, &message);
  if (s != PLAB_OK) {
    std::fprintf(stderr, "partition-lab: %s: %s\n", plab_status_string(s), plab_last_error());
    return s == PLAB_INVALID_CONFIG ? 2 : 1;
  }
  if (message && *message) std::fprintf(stderr, "partition-lab: %s\n", message);
  plab_string_free(message);
  return exit_code;
}
