#pragma once

// Experiment results and their JSON / CSV forms. Everything here is
// deterministic; wall-clock data lives only in the run manifest.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bolab/dynamics.hpp"

namespace bolab {

inline constexpr int schema_version = 1;

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Column-named numeric table, written as CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  nlohmann::ordered_json statistics = nlohmann::ordered_json::object();
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  std::map<std::string, Table> tables;  ///< bulk per-sample or per-step data, emitted as CSV

  Check& add_check(std::string name, bool passed, double value, double threshold, std::string detail = {});
  /// True when every check passed (and there is at least one).
  bool passed() const noexcept;
  /// Names of failed checks.
  std::vector<std::string> failures() const;

  nlohmann::ordered_json to_json() const;
};

/// Doubles are written with 17 significant digits so reports round-trip exactly.
std::string format_double(double v);

Table trajectory_table(const TrajectoryRecord& rec, bool include_coefficients = false);
nlohmann::ordered_json trajectory_json(const TrajectoryRecord& rec);

}  // namespace bolab
