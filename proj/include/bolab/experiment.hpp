#pragma once

// Configuration, orchestration and persistence for the command-line front end.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bolab/report.hpp"

namespace bolab {

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"evolve", "sample",  "invariance", "gauge-check", "cancellation",
                                          "divisor", "snk", "tails", "params"};
  return s;
}

struct ExperimentConfig {
  std::string subcommand;
  int N = 8;  ///< truncation; 0 means infinite where an experiment allows it
  int n_max = 0;  ///< 0: same as N
  double s = 0.1;
  double dt = 1e-3;
  double t = 0.5;
  std::uint64_t M = 10000;
  std::uint64_t seed = 7;
  int mu_max = 20;
  double zeta_a = 1.0;
  std::vector<std::string> observables{"mass_N", "re_f1", "abs_f2_sq"};
  std::string output_dir;
  unsigned workers = 0;  ///< 0: all hardware threads; never affects results
  double amplitude = 1.0;  ///< scale applied to Wiener-sampled initial data
  double dt_fd = 1e-4;
  long K_max = 10000;
  int instances = 100;
  int d_max = 6;
  int N_max = 8;
  int k_max = 8;
  std::vector<double> alphas{2.0, 10.0, 1700.0, 2000.0};
  std::vector<int> tail_N{1, 4};
  std::vector<double> K_grid;  ///< empty: chosen from the sample
  std::uint64_t moment_M = 1000000;
  bool per_sample_csv = false;

  /// Defaults used by the command line for one subcommand.
  static ExperimentConfig defaults_for(const std::string& subcommand);

  /// Throws ConfigError naming the offending field.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  /// `subcommand` and `schema_version` are required; unknown keys are reported in `warnings`.
  static ExperimentConfig from_json(const nlohmann::json& j, std::vector<std::string>* warnings = nullptr);
};

/// Parse a JSON config file. Parse errors are reported with the line number.
ExperimentConfig load_config(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

struct RunManifest {
  std::string config_hash;  ///< FNV-1a 64 of the serialized config
  std::string version;
  std::string started_at;   ///< UTC, ISO 8601
  double wall_seconds = 0.0;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> artifacts;

  nlohmann::ordered_json to_json() const;
};

std::string config_hash(const ExperimentConfig& cfg);

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_config_error = 2, exit_numerical_abort = 3 };

struct RunResult {
  int exit_code = exit_ok;
  ExperimentReport report;
  RunManifest manifest;
  std::string error;
};

/// Run one experiment without touching the filesystem.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Validate, run, write the report (and any CSV tables) under cfg.output_dir, and map the
/// outcome to an exit code. Reports are written even when checks fail.
RunResult run(const ExperimentConfig& cfg);

/// Writes <dir>/<experiment>_report.json (with the manifest) and returns its path.
std::filesystem::path save_report(const ExperimentReport& report, const std::filesystem::path& dir,
                                  RunManifest* manifest = nullptr);

/// BOLAB_OUTPUT_DIR if set, otherwise "bolab-output".
std::string default_output_dir();

}  // namespace bolab
