#include "bolab/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace bolab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << columns[j];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_double(row[j]);
    os << '\n';
  }
  return os.str();
}

Check& ExperimentReport::add_check(std::string name, bool passed, double value, double threshold, std::string detail) {
  checks.push_back({std::move(name), passed, value, threshold, std::move(detail)});
  return checks.back();
}

bool ExperimentReport::passed() const noexcept {
  if (checks.empty()) return false;
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<std::string> ExperimentReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

namespace {

nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

nlohmann::ordered_json ExperimentReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["experiment"] = experiment;
  j["config"] = config;
  j["statistics"] = statistics;
  auto& cs = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["value"] = number(c.value);
    e["threshold"] = number(c.threshold);
    if (!c.detail.empty()) e["detail"] = c.detail;
    cs.push_back(std::move(e));
  }
  j["warnings"] = warnings;
  j["passed"] = passed();
  return j;
}

Table trajectory_table(const TrajectoryRecord& rec, bool include_coefficients) {
  Table t;
  t.columns = {"t", "mass", "energy", "leak"};
  const int n_max = rec.states.empty() ? 0 : rec.states.front().n_max();
  if (include_coefficients) {
    for (int n = 1; n <= n_max; ++n) {
      t.columns.push_back("re_u" + std::to_string(n));
      t.columns.push_back("im_u" + std::to_string(n));
    }
  }
  for (std::size_t k = 0; k < rec.size(); ++k) {
    std::vector<double> row{rec.times[k], rec.mass[k], rec.energy[k], rec.leak[k]};
    if (include_coefficients) {
      for (int n = 1; n <= n_max; ++n) {
        row.push_back(rec.states[k][n].real());
        row.push_back(rec.states[k][n].imag());
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

nlohmann::ordered_json trajectory_json(const TrajectoryRecord& rec) {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["times"] = rec.times;
  j["mass"] = rec.mass;
  j["energy"] = rec.energy;
  j["leak"] = rec.leak;
  auto& states = j["states"] = nlohmann::ordered_json::array();
  for (const auto& s : rec.states) {
    nlohmann::ordered_json modes = nlohmann::ordered_json::array();
    for (int n = 1; n <= s.n_max(); ++n) modes.push_back({s[n].real(), s[n].imag()});
    states.push_back(std::move(modes));
  }
  return j;
}

}  // namespace bolab
