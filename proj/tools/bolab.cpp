// bolab: command-line front end. Each subcommand runs one experiment, writes a
// JSON report (plus CSV tables) and exits 0 / 1 / 2 / 3 for pass / failed check /
// config error / numerical abort.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bolab/errors.hpp"
#include "bolab/experiment.hpp"

namespace {

struct Flags {
  std::optional<int> N, n_max, mu_max, instances, d_max, N_max, k_max;
  std::optional<double> s, dt, t, zeta_a, amplitude, dt_fd;
  std::optional<std::uint64_t> M, seed, moment_M;
  std::optional<long> K_max;
  std::optional<unsigned> workers;
  std::optional<std::string> output_dir, config;
  std::vector<std::string> observables;
  std::vector<double> alphas, K_grid;
  std::vector<int> tail_N;
  bool per_sample_csv = false;
  bool quiet = false;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file; explicit flags override its values");
  app->add_option("--N", f.N, "truncation N (0 = infinite, evolve only)");
  app->add_option("--n-max", f.n_max, "resolution (default N)");
  app->add_option("--s", f.s, "small parameter s in (0, 1/4)");
  app->add_option("--dt", f.dt, "integrator step");
  app->add_option("--t", f.t, "flow time");
  app->add_option("--M", f.M, "sample count");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--mu-max", f.mu_max, "series depth / cancellation sweep limit");
  app->add_option("--zeta-a", f.zeta_a, "plateau half-width of zeta");
  app->add_option("--observables", f.observables, "observables (mass_N, mass, re_f1, im_f1, abs_f1_sq, abs_f2_sq, energy)")
      ->delimiter(',');
  app->add_option("--output-dir", f.output_dir, "report directory (default $BOLAB_OUTPUT_DIR)");
  app->add_option("--workers", f.workers, "worker threads (0 = all)");
  app->add_option("--amplitude", f.amplitude, "scale of sampled initial data");
  app->add_option("--dt-fd", f.dt_fd, "finite-difference step of the gauge evolution check");
  app->add_option("--K-max", f.K_max, "largest Eisenstein norm in the divisor sweep");
  app->add_option("--instances", f.instances, "random quadruple instances");
  app->add_option("--d-max", f.d_max, "largest dyadic scale for quadruples");
  app->add_option("--N-max", f.N_max, "largest N in the S_{N,k} sweep");
  app->add_option("--k-max", f.k_max, "largest k in the S_{N,k} sweep");
  app->add_option("--alphas", f.alphas, "quartic tail thresholds")->delimiter(',');
  app->add_option("--tail-N", f.tail_N, "mode counts for the quartic tail")->delimiter(',');
  app->add_option("--K-grid", f.K_grid, "Z1 tail thresholds (default: from the sample)")->delimiter(',');
  app->add_option("--moment-M", f.moment_M, "draws for the Gaussian moment and quartic checks");
  app->add_flag("--per-sample-csv", f.per_sample_csv, "write per-sample observables (invariance)");
  app->add_flag("-q,--quiet", f.quiet, "only print the report path");
}

template <class T>
void apply(const std::optional<T>& v, T& out) {
  if (v) out = *v;
}

bolab::ExperimentConfig resolve(const std::string& sub, const Flags& f, std::vector<std::string>& warnings) {
  bolab::ExperimentConfig c = bolab::ExperimentConfig::defaults_for(sub);
  if (f.config) {
    c = bolab::load_config(*f.config, &warnings);
    if (c.subcommand != sub) {
      throw bolab::ConfigError("subcommand", "config file is for '" + c.subcommand + "', not '" + sub + "'");
    }
  }
  apply(f.N, c.N);
  apply(f.n_max, c.n_max);
  apply(f.s, c.s);
  apply(f.dt, c.dt);
  apply(f.t, c.t);
  apply(f.M, c.M);
  apply(f.seed, c.seed);
  apply(f.mu_max, c.mu_max);
  apply(f.zeta_a, c.zeta_a);
  apply(f.output_dir, c.output_dir);
  apply(f.workers, c.workers);
  apply(f.amplitude, c.amplitude);
  apply(f.dt_fd, c.dt_fd);
  apply(f.K_max, c.K_max);
  apply(f.instances, c.instances);
  apply(f.d_max, c.d_max);
  apply(f.N_max, c.N_max);
  apply(f.k_max, c.k_max);
  apply(f.moment_M, c.moment_M);
  if (!f.observables.empty()) c.observables = f.observables;
  if (!f.alphas.empty()) c.alphas = f.alphas;
  if (!f.tail_N.empty()) c.tail_N = f.tail_N;
  if (!f.K_grid.empty()) c.K_grid = f.K_grid;
  if (f.per_sample_csv) c.per_sample_csv = true;
  if (c.output_dir.empty()) c.output_dir = bolab::default_output_dir();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral Benjamin-Ono truncation lab"};
  app.set_version_flag("--version", std::string(BOLAB_VERSION));
  app.require_subcommand(1);
  Flags flags;
  const std::map<std::string, std::string> about{
      {"evolve", "integrate the truncated flow from a Wiener sample; mass / energy drift"},
      {"sample", "Wiener and Gibbs ensembles; sampler calibration against alpha_N"},
      {"invariance", "compare Gibbs expectations at time 0 and t"},
      {"gauge-check", "commutator, G and gauge evolution identities"},
      {"cancellation", "exact resonant coefficient cancellation up to mu-max"},
      {"divisor", "Eisenstein counts and dyadic quadruple counts against their oracles"},
      {"snk", "S_{N,k} against its factorial bound"},
      {"tails", "Z1 tail curve, Gaussian moments and the quartic tail bound"},
      {"params", "derived exponents and their ordering for a given s"}};
  for (const auto& name : bolab::subcommands()) add_flags(app.add_subcommand(name, about.at(name)), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bolab::exit_config_error;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  std::vector<std::string> warnings;
  bolab::ExperimentConfig cfg;
  try {
    cfg = resolve(sub, flags, warnings);
  } catch (const std::exception& e) {
    std::cerr << "bolab " << sub << ": " << e.what() << '\n';
    return bolab::exit_config_error;
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

  const bolab::RunResult res = bolab::run(cfg);
  if (!res.error.empty()) std::cerr << "bolab " << sub << ": " << res.error << '\n';
  if (!flags.quiet) {
    for (const auto& c : res.report.checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << bolab::format_double(c.value)
                << "  threshold=" << bolab::format_double(c.threshold) << '\n';
    }
    for (const auto& w : res.report.warnings) std::cout << "warning: " << w << '\n';
  }
  if (!res.manifest.artifacts.empty()) std::cout << res.manifest.artifacts.back() << '\n';
  return res.exit_code;
}
