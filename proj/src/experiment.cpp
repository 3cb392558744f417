#include "bolab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "bolab/combinatorics.hpp"
#include "bolab/dynamics.hpp"
#include "bolab/errors.hpp"
#include "bolab/gauge.hpp"
#include "bolab/gibbs.hpp"
#include "bolab/parameters.hpp"
#include "bolab/theta_polynomial.hpp"

#ifndef BOLAB_VERSION
#define BOLAB_VERSION "dev"
#endif

namespace bolab {

ExperimentConfig ExperimentConfig::defaults_for(const std::string& sub) {
  ExperimentConfig c;
  c.subcommand = sub;
  if (sub == "evolve") {
    c.N = 16;
    c.t = 1.0;
    c.dt = 1e-3;
    c.amplitude = 0.5;
  } else if (sub == "sample") {
    c.N = 16;
    c.M = 100000;
  } else if (sub == "invariance") {
    c.N = 8;
    c.M = 100000;
    c.t = 0.5;
    c.dt = 5e-3;
  } else if (sub == "gauge-check") {
    c.N = 8;
    c.mu_max = 20;
    c.dt_fd = 1e-4;
    c.amplitude = 0.25;
  } else if (sub == "cancellation") {
    c.mu_max = 50;
  } else if (sub == "tails") {
    c.N = 64;
    c.M = 100000;
    c.s = 0.1;
  } else if (sub == "params") {
    c.s = 0.01;
  }
  return c;
}

void ExperimentConfig::validate() const {
  const auto& subs = subcommands();
  if (std::find(subs.begin(), subs.end(), subcommand) == subs.end()) {
    throw ConfigError("subcommand", "unknown subcommand '" + subcommand + "'");
  }
  if (N < 0 || (N == 0 && subcommand != "evolve")) throw ConfigError("N", "must be a positive integer");
  if (N == 0 && n_max < 1) throw ConfigError("n_max", "an infinite truncation needs an explicit n_max");
  if (n_max < 0 || (n_max > 0 && N > 0 && n_max < N)) throw ConfigError("n_max", "must be 0 or at least N");
  if ((subcommand == "params" || subcommand == "tails") && !(s > 0.0 && s < 0.25)) {
    throw ConfigError("s", "must lie in (0, 0.25)");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be positive");
  if (!std::isfinite(t)) throw ConfigError("t", "must be finite");
  if (M < 2) throw ConfigError("M", "needs at least two samples");
  if (mu_max < 0) throw ConfigError("mu_max", "must be nonnegative");
  if (!(zeta_a > 0.0) || !std::isfinite(zeta_a)) throw ConfigError("zeta_a", "must be positive");
  if (observables.empty()) throw ConfigError("observables", "must not be empty");
  for (const auto& o : observables) observable(o, std::max(N, 1));
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw ConfigError("amplitude", "must be positive");
  if (!(dt_fd > 0.0)) throw ConfigError("dt_fd", "must be positive");
  if (K_max < 0) throw ConfigError("K_max", "must be nonnegative");
  if (instances < 0) throw ConfigError("instances", "must be nonnegative");
  if (d_max < 2 || d_max > 8) throw ConfigError("d_max", "must lie in [2, 8]");
  if (N_max < 1 || N_max > 10) throw ConfigError("N_max", "must lie in [1, 10]");
  if (k_max < 0 || k_max > 10) throw ConfigError("k_max", "must lie in [0, 10]");
  for (double a : alphas) {
    if (!(a > 0.0)) throw ConfigError("alphas", "must be positive");
  }
  for (int n : tail_N) {
    if (n < 1) throw ConfigError("tail_N", "must be positive");
  }
  for (std::size_t i = 1; i < K_grid.size(); ++i) {
    if (!(K_grid[i] > K_grid[i - 1])) throw ConfigError("K_grid", "must be strictly increasing");
  }
  if (moment_M < 2) throw ConfigError("moment_M", "needs at least two samples");
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["subcommand"] = subcommand;
  j["N"] = N;
  j["n_max"] = n_max;
  j["s"] = s;
  j["dt"] = dt;
  j["t"] = t;
  j["M"] = M;
  j["seed"] = seed;
  j["mu_max"] = mu_max;
  j["zeta_a"] = zeta_a;
  j["psi"] = CutoffProfile{}.describe();
  j["observables"] = observables;
  j["output_dir"] = output_dir;
  j["workers"] = workers;
  j["amplitude"] = amplitude;
  j["dt_fd"] = dt_fd;
  j["K_max"] = K_max;
  j["instances"] = instances;
  j["d_max"] = d_max;
  j["N_max"] = N_max;
  j["k_max"] = k_max;
  j["alphas"] = alphas;
  j["tail_N"] = tail_N;
  j["K_grid"] = K_grid;
  j["moment_M"] = moment_M;
  j["per_sample_csv"] = per_sample_csv;
  return j;
}

namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(key, std::string("wrong type: ") + e.what());
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j, std::vector<std::string>* warnings) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  if (!j.contains("schema_version")) throw ConfigError("schema_version", "required field missing");
  if (!j.contains("subcommand")) throw ConfigError("subcommand", "required field missing");
  int version = 0;
  read(j, "schema_version", version);
  if (version != schema_version) {
    throw ConfigError("schema_version", "unsupported version " + std::to_string(version));
  }
  std::string sub;
  read(j, "subcommand", sub);
  ExperimentConfig c = defaults_for(sub);
  read(j, "N", c.N);
  read(j, "n_max", c.n_max);
  read(j, "s", c.s);
  read(j, "dt", c.dt);
  read(j, "t", c.t);
  read(j, "M", c.M);
  read(j, "seed", c.seed);
  read(j, "mu_max", c.mu_max);
  read(j, "zeta_a", c.zeta_a);
  read(j, "observables", c.observables);
  read(j, "output_dir", c.output_dir);
  read(j, "workers", c.workers);
  read(j, "amplitude", c.amplitude);
  read(j, "dt_fd", c.dt_fd);
  read(j, "K_max", c.K_max);
  read(j, "instances", c.instances);
  read(j, "d_max", c.d_max);
  read(j, "N_max", c.N_max);
  read(j, "k_max", c.k_max);
  read(j, "alphas", c.alphas);
  read(j, "tail_N", c.tail_N);
  read(j, "K_grid", c.K_grid);
  read(j, "moment_M", c.moment_M);
  read(j, "per_sample_csv", c.per_sample_csv);

  static const std::set<std::string> known{
      "schema_version", "subcommand", "N",      "n_max",     "s",     "dt",         "t",      "M",
      "seed",           "mu_max",     "zeta_a", "psi",       "observables", "output_dir", "workers", "amplitude",
      "dt_fd",          "K_max",      "instances", "d_max",  "N_max", "k_max",      "alphas", "tail_N",
      "K_grid",         "moment_M",   "per_sample_csv"};
  if (warnings != nullptr) {
    for (const auto& item : j.items()) {
      if (!known.count(item.key())) warnings->push_back("unknown config field '" + item.key() + "' ignored");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ConfigError("", path.string() + ":" + std::to_string(line) + ": " + e.what());
  }
  return ExperimentConfig::from_json(j, warnings);
}

std::string config_hash(const ExperimentConfig& cfg) {
  auto j = cfg.to_json();
  j.erase("workers");
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash;
  j["version"] = version;
  j["started_at"] = started_at;
  j["wall_seconds"] = wall_seconds;
  nlohmann::ordered_json c = nlohmann::ordered_json::object();
  for (const auto& [name, ok] : checks) c[name] = ok;
  j["checks"] = c;
  j["artifacts"] = artifacts;
  return j;
}

std::string default_output_dir() {
  if (const char* env = std::getenv("BOLAB_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return "bolab-output";
}

namespace {

void merge(ExperimentReport& into, const ExperimentReport& part, const std::string& prefix) {
  into.statistics[prefix] = part.statistics;
  for (const auto& c : part.checks) into.checks.push_back({prefix + "." + c.name, c.passed, c.value, c.threshold, c.detail});
  for (const auto& w : part.warnings) into.warnings.push_back(prefix + ": " + w);
  for (const auto& [name, t] : part.tables) into.tables[prefix + "_" + name] = t;
}

Truncation truncation_of(const ExperimentConfig& c) { return c.N == 0 ? Truncation::infinite() : Truncation::at(c.N); }

int resolution_of(const ExperimentConfig& c) { return c.n_max > 0 ? c.n_max : c.N; }

ExperimentReport run_evolve(const ExperimentConfig& c) {
  IntegratorConfig ic;
  ic.dt = c.dt;
  ic.N = truncation_of(c);
  ic.n_max = resolution_of(c);
  const int support = c.N == 0 ? ic.n_max : c.N;
  const FourierState u0 = c.amplitude * sample_wiener(support, c.seed).resized(ic.n_max);
  const long steps = fit_steps(c.t, c.dt).first;
  FlowOptions fo;
  fo.record_every = static_cast<int>(std::max(1L, steps / 1000));
  const TrajectoryRecord rec = flow(u0, c.t, ic, fo);

  double mass_drift = 0.0, energy_drift = 0.0, leak = 0.0;
  for (std::size_t k = 0; k < rec.size(); ++k) {
    mass_drift = std::max(mass_drift, std::abs(rec.mass[k] - rec.mass[0]) / rec.mass[0]);
    energy_drift = std::max(energy_drift, std::abs(rec.energy[k] - rec.energy[0]) / std::abs(rec.energy[0]));
    leak = std::max(leak, rec.leak[k]);
  }
  ExperimentReport r;
  r.experiment = "evolve";
  r.statistics["steps"] = steps;
  r.statistics["records"] = rec.size();
  r.statistics["initial_mass"] = rec.mass.front();
  r.statistics["initial_energy"] = rec.energy.front();
  r.statistics["final_mass"] = rec.mass.back();
  r.statistics["final_energy"] = rec.energy.back();
  r.statistics["max_relative_mass_drift"] = mass_drift;
  r.statistics["max_relative_energy_drift"] = energy_drift;
  r.statistics["max_leak_above_N"] = leak;
  r.add_check("mass_drift", mass_drift < 1e-10, mass_drift, 1e-10);
  r.add_check("energy_drift", energy_drift < 1e-8, energy_drift, 1e-8);
  r.add_check("support_preserved", leak == 0.0, leak, 0.0, "largest |u_n| above N");
  r.tables["trajectory"] = trajectory_table(rec, true);
  return r;
}

ExperimentReport run_sample(const ExperimentConfig& c) {
  ZetaProfile z{c.zeta_a};
  const GibbsEnsemble ens = build_ensemble(c.N, c.M, c.seed, z, CubicVariant::smooth, c.workers);
  ExperimentReport r;
  r.experiment = "sample";
  const std::vector<double> ones(ens.size(), 1.0);
  std::vector<double> massN(ens.size()), f1(ens.size());
  bool finite = true;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    massN[i] = mass(ens.samples[i]);
    f1[i] = std::norm(ens.samples[i][1]);
    finite = finite && std::isfinite(ens.weights[i]) && ens.weights[i] >= 0.0;
  }
  const Estimate em = weighted_mean(ones, massN);
  const Estimate ef = weighted_mean(ones, f1);
  const double a = alpha(c.N);
  const double zm = (em.mean - a) / em.std_error;
  const double target = 1.0 / (4.0 * std::numbers::pi);
  const double zf = (ef.mean - target) / ef.std_error;
  r.statistics["samples"] = ens.size();
  r.statistics["alpha_N"] = a;
  r.statistics["wiener_mean_mass_N"] = em.mean;
  r.statistics["wiener_stderr_mass_N"] = em.std_error;
  r.statistics["wiener_mean_abs_f1_sq"] = ef.mean;
  r.statistics["wiener_stderr_abs_f1_sq"] = ef.std_error;
  r.statistics["effective_sample_size"] = ens.effective_sample_size();
  r.statistics["kish_sample_size"] = ens.kish_sample_size();
  r.statistics["zeta"] = z.describe();
  auto& gibbs = r.statistics["gibbs_means"] = nlohmann::ordered_json::array();
  for (const auto& name : c.observables) {
    const Observable o = observable(name, c.N);
    const Estimate e = weighted_expectation(ens, o.eval);
    gibbs.push_back({{"name", name}, {"mean", e.mean}, {"stderr", e.std_error}});
  }
  r.add_check("mass_N_calibration", std::abs(zm) < 3.0, std::abs(zm), 3.0, "|E||P_N f||^2 - alpha_N| / stderr");
  r.add_check("mode_variance", std::abs(zf) < 3.0, std::abs(zf), 3.0, "|E|f_1|^2 - 1/(4 pi)| / stderr");
  r.add_check("weights_finite", finite, finite ? 1.0 : 0.0, 1.0);
  r.add_check("effective_sample_size_above_one", ens.effective_sample_size() > 1.0, ens.effective_sample_size(), 1.0);
  return r;
}

ExperimentReport run_gauge(const ExperimentConfig& c) {
  GaugeConfig g;
  g.N = Truncation::at(c.N);
  g.mu_max = c.mu_max;
  ExperimentReport r;
  r.experiment = "gauge-check";
  double comm = 0.0, gid = 0.0;
  for (std::uint64_t j = 0; j < 10; ++j) {
    const FourierState u = c.amplitude * sample_wiener(c.N, c.seed, 2 * j);
    const FourierState phi = sample_wiener(c.N, c.seed, 2 * j + 1);
    comm = std::max(comm, commutator_identity_check(phi.to_spectrum(), u, g));
    gid = std::max(gid, G_identity_residual(u, g));
  }
  const FourierState u = c.amplitude * sample_wiener(c.N, c.seed, 0);
  const GaugeResidual ev = gauge_evolution_residual(u, g, c.dt_fd);
  r.statistics["commutator_residual"] = comm;
  r.statistics["G_identity_residual"] = gid;
  r.statistics["evolution_relative_residual"] = ev.residual;
  r.statistics["evolution_relative_residual_half_step"] = ev.residual_half;
  r.statistics["halving_ratio"] = ev.ratio;
  r.statistics["series_tail_norm"] = ev.tail_norm;
  r.warnings = ev.warnings;
  r.add_check("commutator_identity", comm < 1e-12, comm, 1e-12);
  r.add_check("G_identity", gid < 1e-11, gid, 1e-11);
  r.add_check("evolution_identity", ev.residual < 1e-6, ev.residual, 1e-6);
  r.add_check("second_order_rate", ev.ratio > 3.0 && ev.ratio < 5.0, ev.ratio, 4.0, "residual(dt) / residual(dt/2)");
  return r;
}

ExperimentReport run_divisor(const ExperimentConfig& c) {
  DivisorSweepOptions o;
  o.eisenstein_K_max = c.K_max;
  o.quadruple_instances = c.instances;
  o.d_max = c.d_max;
  o.seed = c.seed;
  ExperimentReport r = divisor_sweep(o);
  mpz_class trivial = 0;
  for (int d = 2; d <= std::min(4, c.d_max); ++d) trivial += quadruple_count_by_enumeration({0, 0, d, std::nullopt});
  r.statistics["zero_data_count_d_le_4"] = trivial.get_str();
  r.add_check("zero_data_has_no_admissible_quadruple", trivial == 0, trivial.get_d(), 0.0);
  return r;
}

ExperimentReport run_tails(const ExperimentConfig& c) {
  ExperimentReport r;
  r.experiment = "tails";
  merge(r, z1_tail_curve(c.K_grid, c.N, c.M, c.seed, parameter_set(c.s), c.workers), "z1");
  merge(r, gaussian_moment_check(1, c.moment_M, c.seed), "moment_m1");
  merge(r, gaussian_moment_check(2, c.moment_M, c.seed + 1), "moment_m2");
  for (int n : c.tail_N) merge(r, quartic_tail_check(n, c.alphas, c.moment_M, c.seed + 2), "quartic_N" + std::to_string(n));
  return r;
}

ExperimentReport run_params(const ExperimentConfig& c) {
  const ParameterSet p = parameter_set(c.s);
  ExperimentReport r;
  r.experiment = "params";
  r.statistics["s"] = p.s;
  r.statistics["p"] = p.p;
  r.statistics["r"] = p.r;
  r.statistics["b"] = p.b;
  r.statistics["tau"] = p.tau;
  r.statistics["q"] = p.q;
  r.statistics["kappa"] = p.kappa;
  r.statistics["gamma"] = p.gamma;
  r.statistics["epsilon"] = p.epsilon;
  auto& h = r.statistics["hierarchy"] = nlohmann::ordered_json::array();
  const auto v = p.hierarchy();
  for (std::size_t i = 0; i < v.size(); ++i) h.push_back({{"factor", ParameterSet::hierarchy_labels[i]}, {"value", v[i]}});
  r.statistics["hierarchy_holds"] = p.hierarchy_holds();
  bool finite = true;
  for (double x : v) finite = finite && std::isfinite(x) && x > 0.0;
  r.add_check("factors_positive_finite", finite, finite ? 1.0 : 0.0, 1.0);
  // The strict chain is only claimed for s <= 0.01; it breaks between 0.03 and 0.05.
  if (p.s <= 0.01) {
    r.add_check("hierarchy_increasing", p.hierarchy_holds(), p.hierarchy_holds() ? 1.0 : 0.0, 1.0);
  } else if (!p.hierarchy_holds()) {
    r.warnings.push_back("hierarchy ordering fails at s = " + format_double(p.s) + " (asserted only for s <= 0.01)");
  }
  return r;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& c) {
  c.validate();
  ExperimentReport r;
  if (c.subcommand == "evolve") {
    r = run_evolve(c);
  } else if (c.subcommand == "sample") {
    r = run_sample(c);
  } else if (c.subcommand == "invariance") {
    InvarianceOptions o;
    o.N = c.N;
    o.M = c.M;
    o.t = c.t;
    o.dt = c.dt;
    o.seed = c.seed;
    o.zeta = ZetaProfile{c.zeta_a};
    o.observables = c.observables;
    o.workers = c.workers;
    o.per_sample_table = c.per_sample_csv;
    r = invariance_experiment(o);
  } else if (c.subcommand == "gauge-check") {
    r = run_gauge(c);
  } else if (c.subcommand == "cancellation") {
    r = verify_cancellation(c.mu_max);
  } else if (c.subcommand == "divisor") {
    r = run_divisor(c);
  } else if (c.subcommand == "snk") {
    r = snk_bound_check(c.N_max, c.k_max);
  } else if (c.subcommand == "tails") {
    r = run_tails(c);
  } else {
    r = run_params(c);
  }
  r.experiment = c.subcommand;
  r.config = c.to_json();
  return r;
}

namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::filesystem::path save_report(const ExperimentReport& report, const std::filesystem::path& dir,
                                  RunManifest* manifest) {
  std::filesystem::create_directories(dir);
  const std::string stem = report.experiment.empty() ? "report" : report.experiment;
  std::vector<std::string> artifacts;
  for (const auto& [name, table] : report.tables) {
    const auto p = dir / (stem + "_" + name + ".csv");
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << table.to_csv();
    artifacts.push_back(p.string());
  }
  const auto path = dir / (stem + "_report.json");
  auto j = report.to_json();
  if (manifest != nullptr) {
    manifest->artifacts = artifacts;
    manifest->artifacts.push_back(path.string());
    manifest->checks.clear();
    for (const auto& c : report.checks) manifest->checks.emplace_back(c.name, c.passed);
    j["manifest"] = manifest->to_json();
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  return path;
}

RunResult run(const ExperimentConfig& cfg) {
  RunResult res;
  const auto start = std::chrono::steady_clock::now();
  res.manifest.started_at = utc_now();
  res.manifest.version = BOLAB_VERSION;
  res.manifest.config_hash = config_hash(cfg);
  res.report.experiment = cfg.subcommand;
  res.report.config = cfg.to_json();
  try {
    res.report = run_experiment(cfg);
    res.exit_code = res.report.passed() ? exit_ok : exit_check_failed;
    if (res.report.statistics.contains("censored_samples") && res.report.statistics["censored_samples"].get<long>() > 0) {
      res.exit_code = exit_numerical_abort;
    }
  } catch (const ConfigError& e) {
    res.exit_code = exit_config_error;
    res.error = e.what();
  } catch (const DomainError& e) {
    res.exit_code = exit_config_error;
    res.error = e.what();
  } catch (const NonFiniteState& e) {
    res.exit_code = exit_numerical_abort;
    res.error = e.what();
  } catch (const DegenerateEnsemble& e) {
    res.exit_code = exit_numerical_abort;
    res.error = e.what();
  }
  if (!res.error.empty()) res.report.warnings.push_back("aborted: " + res.error);
  res.manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string dir = cfg.output_dir.empty() ? default_output_dir() : cfg.output_dir;
  try {
    save_report(res.report, dir, &res.manifest);
  } catch (const std::exception& e) {
    if (res.exit_code == exit_ok || res.exit_code == exit_check_failed) res.exit_code = exit_config_error;
    res.error = e.what();
  }
  return res;
}

}  // namespace bolab
