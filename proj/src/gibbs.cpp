#include "bolab/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "bolab/errors.hpp"
#include "bolab/parallel.hpp"
#include "bolab/random.hpp"

namespace bolab {

double ZetaProfile::operator()(double x) const noexcept {
  const double ax = std::abs(x);
  if (ax <= a) return 1.0;
  if (ax >= 2.0 * a) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * (ax - a) / a);
  return c * c;
}

std::string ZetaProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "zeta: 1 on |x|<=" << a << ", cos^2(pi/2 (|x|-a)/a) on a<|x|<2a, 0 beyond (a=" << a << ")";
  return os.str();
}

std::string to_string(CubicVariant v) { return v == CubicVariant::smooth ? "smooth" : "sharp"; }

FourierState sample_wiener(int N, std::uint64_t seed, std::uint64_t index) {
  if (N < 1) throw DomainError("sample_wiener needs N >= 1");
  SampleRng rng(seed, index);
  FourierState f(N);
  auto c = f.positive_modes();
  for (int n = 1; n <= N; ++n) {
    c[static_cast<std::size_t>(n)] = rng.complex_gaussian() / (2.0 * std::sqrt(std::numbers::pi * n));
  }
  return f;
}

double alpha(int N) {
  if (N < 1) throw DomainError("alpha needs N >= 1");
  double s = 0.0;
  for (int n = N; n >= 1; --n) s += 1.0 / n;
  return s;
}

double gibbs_weight(const FourierState& f, int N, const ZetaProfile& zeta, CubicVariant variant,
                    const CutoffProfile& psi) {
  const FourierState low = f.resized(std::min(f.n_max(), N));
  const double z = zeta(mass(low) - alpha(N));
  if (z == 0.0) return 0.0;
  const double cube = variant == CubicVariant::smooth ? integrate_cube(smooth_truncation(f, Truncation::at(N), psi))
                                                      : integrate_cube(low);
  return z * std::exp(cube / 3.0);
}

double GibbsEnsemble::effective_sample_size() const {
  const double mx = weights.empty() ? 0.0 : *std::max_element(weights.begin(), weights.end());
  return mx > 0.0 ? pairwise_sum(weights) / mx : 0.0;
}

double GibbsEnsemble::kish_sample_size() const {
  std::vector<double> sq(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) sq[i] = weights[i] * weights[i];
  const double s2 = pairwise_sum(sq);
  const double s = pairwise_sum(weights);
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

GibbsEnsemble build_ensemble(int N, std::size_t M, std::uint64_t seed, const ZetaProfile& zeta, CubicVariant variant,
                             unsigned workers) {
  if (M < 1) throw DomainError("ensemble needs at least one sample");
  GibbsEnsemble ens;
  ens.samples.resize(M);
  ens.weights.resize(M);
  ens.seed = seed;
  ens.N = N;
  ens.zeta = zeta;
  ens.variant = variant;
  parallel_for(M, workers, [&](std::size_t i, unsigned) {
    ens.samples[i] = sample_wiener(N, seed, i);
    ens.weights[i] = gibbs_weight(ens.samples[i], N, zeta, variant);
  });
  return ens;
}

Estimate weighted_mean(std::span<const double> weights, std::span<const double> values) {
  if (weights.size() != values.size()) throw DomainError("weights and values differ in length");
  const double W = pairwise_sum(weights);
  if (!(W > 0.0)) throw DegenerateEnsemble("weights sum to zero");
  std::vector<double> buf(weights.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = weights[i] * values[i];
  const double mean = pairwise_sum(buf) / W;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const double wt = weights[i] / W;
    const double d = values[i] - mean;
    buf[i] = weights[i] == 0.0 ? 0.0 : wt * wt * d * d;
  }
  return {mean, std::sqrt(pairwise_sum(buf))};
}

Estimate weighted_expectation(const GibbsEnsemble& ens, const std::function<double(const FourierState&)>& observable) {
  std::vector<double> values(ens.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = ens.weights[i] == 0.0 ? 0.0 : observable(ens.samples[i]);
  return weighted_mean(ens.weights, values);
}

Observable observable(const std::string& name, int N, const CutoffProfile& psi) {
  if (name == "mass_N") return {name, [N](const FourierState& f) { return mass(f.resized(std::min(f.n_max(), N))); }};
  if (name == "mass") return {name, [](const FourierState& f) { return mass(f); }};
  if (name == "re_f1") return {name, [](const FourierState& f) { return f[1].real(); }};
  if (name == "im_f1") return {name, [](const FourierState& f) { return f[1].imag(); }};
  if (name == "abs_f1_sq") return {name, [](const FourierState& f) { return std::norm(f[1]); }};
  if (name == "abs_f2_sq") return {name, [](const FourierState& f) { return std::norm(f[2]); }};
  if (name == "energy") {
    return {name, [N, psi](const FourierState& f) { return hamiltonian(f, Truncation::at(N), psi); }};
  }
  throw ConfigError("observables", "unknown observable '" + name + "'");
}

std::vector<std::string> default_invariance_observables() { return {"mass_N", "re_f1", "abs_f2_sq"}; }

ExperimentReport invariance_experiment(const InvarianceOptions& o) {
  if (o.N < 1) throw DomainError("invariance needs N >= 1");
  if (o.M < 2) throw DomainError("invariance needs at least two samples");
  if (o.observables.empty()) throw ConfigError("observables", "empty observable list");
  std::vector<Observable> obs;
  for (const auto& n : o.observables) obs.push_back(observable(n, o.N));
  const std::size_t K = obs.size();

  IntegratorConfig cfg;
  cfg.dt = o.dt;
  cfg.N = Truncation::at(o.N);
  cfg.n_max = o.N;
  cfg.validate();

  std::vector<double> weight(o.M), drift(o.M, 0.0);
  std::vector<std::vector<double>> before(K, std::vector<double>(o.M)), after(K, std::vector<double>(o.M));
  std::vector<char> censored(o.M, 0);

  const unsigned workers = o.workers == 0 ? default_workers() : o.workers;
  std::vector<std::optional<Ifrk4Stepper>> steppers(workers);
  parallel_for(o.M, workers, [&](std::size_t i, unsigned w) {
    if (!steppers[w]) steppers[w].emplace(cfg);
    FourierState f = sample_wiener(o.N, o.seed, i);
    weight[i] = gibbs_weight(f, o.N, o.zeta, o.variant);
    for (std::size_t k = 0; k < K; ++k) before[k][i] = obs[k].eval(f);
    if (weight[i] == 0.0) {
      for (std::size_t k = 0; k < K; ++k) after[k][i] = before[k][i];
      return;
    }
    const double m0 = mass(f);
    try {
      steppers[w]->advance(f, o.t);
    } catch (const NonFiniteState&) {
      censored[i] = 1;
      for (std::size_t k = 0; k < K; ++k) after[k][i] = before[k][i];
      return;
    }
    drift[i] = std::abs(mass(f) - m0) / m0;
    for (std::size_t k = 0; k < K; ++k) after[k][i] = obs[k].eval(f);
  });

  ExperimentReport rep;
  rep.experiment = "invariance";
  std::size_t n_censored = 0, n_zero = 0;
  for (std::size_t i = 0; i < o.M; ++i) {
    n_censored += censored[i] != 0;
    n_zero += weight[i] == 0.0;
  }
  for (std::size_t i = 0; i < o.M; ++i) {
    if (censored[i]) weight[i] = 0.0;
  }

  GibbsEnsemble view;
  view.weights = weight;
  const double W = pairwise_sum(weight);
  const double wmax = *std::max_element(weight.begin(), weight.end());
  rep.statistics["samples"] = o.M;
  rep.statistics["zero_weight_samples"] = n_zero;
  rep.statistics["censored_samples"] = n_censored;
  rep.statistics["weight_sum"] = W;
  rep.statistics["effective_sample_size"] = wmax > 0.0 ? W / wmax : 0.0;
  rep.statistics["kish_sample_size"] = view.kish_sample_size();
  rep.statistics["max_relative_mass_drift"] = *std::max_element(drift.begin(), drift.end());

  auto& table = rep.statistics["observables"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < K; ++k) {
    const Estimate e0 = weighted_mean(weight, before[k]);
    const Estimate et = weighted_mean(weight, after[k]);
    std::vector<double> diff(o.M);
    for (std::size_t i = 0; i < o.M; ++i) diff[i] = after[k][i] - before[k][i];
    const Estimate ed = weighted_mean(weight, diff);
    const double se = std::hypot(e0.std_error, et.std_error);
    const double z = se > 0.0 ? (et.mean - e0.mean) / se : 0.0;
    const double zp = ed.std_error > 0.0 ? ed.mean / ed.std_error : 0.0;
    nlohmann::ordered_json row;
    row["name"] = obs[k].name;
    row["mean_0"] = e0.mean;
    row["stderr_0"] = e0.std_error;
    row["mean_t"] = et.mean;
    row["stderr_t"] = et.std_error;
    row["z"] = z;
    row["paired_mean_difference"] = ed.mean;
    row["paired_stderr"] = ed.std_error;
    row["paired_z"] = zp;
    table.push_back(row);
    rep.add_check("z_" + obs[k].name, std::abs(z) < o.z_threshold, std::abs(z), o.z_threshold,
                  "|z| of E[phi o Phi_t] - E[phi]");
  }
  rep.add_check("no_censored_samples", n_censored == 0, static_cast<double>(n_censored), 0.0);
  if (n_censored > 0) rep.warnings.push_back(std::to_string(n_censored) + " trajectories produced non-finite values");

  if (o.per_sample_table) {
    Table t;
    t.columns = {"index", "weight"};
    for (const auto& ob : obs) t.columns.push_back(ob.name + "_0");
    for (const auto& ob : obs) t.columns.push_back(ob.name + "_t");
    for (std::size_t i = 0; i < o.M; ++i) {
      std::vector<double> r{static_cast<double>(i), weight[i]};
      for (std::size_t k = 0; k < K; ++k) r.push_back(before[k][i]);
      for (std::size_t k = 0; k < K; ++k) r.push_back(after[k][i]);
      t.rows.push_back(std::move(r));
    }
    rep.tables["samples"] = std::move(t);
  }
  return rep;
}

ExperimentReport z1_tail_curve(const std::vector<double>& K_grid_in, int N, std::size_t M, std::uint64_t seed,
                               const ParameterSet& params, unsigned workers) {
  if (M < 1) throw DomainError("tail curve needs samples");
  if (!std::is_sorted(K_grid_in.begin(), K_grid_in.end()) ||
      std::adjacent_find(K_grid_in.begin(), K_grid_in.end()) != K_grid_in.end()) {
    throw DomainError("K grid must be strictly increasing");
  }
  std::vector<double> norms(M);
  parallel_for(M, workers, [&](std::size_t i, unsigned) { norms[i] = z1_norm(sample_wiener(N, seed, i), params); });
  std::vector<double> sorted = norms;
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> K_grid = K_grid_in;
  if (K_grid.empty()) {
    // 0 up to the 99.9% quantile in 12 equal steps.
    const double top = sorted[std::min(M - 1, static_cast<std::size_t>(0.999 * static_cast<double>(M)))];
    for (int j = 0; j <= 12; ++j) K_grid.push_back(top * j / 12.0);
  }

  ExperimentReport rep;
  rep.experiment = "z1_tail";
  Table curve;
  curve.columns = {"K", "P_exceed", "count"};
  std::vector<double> xs, ys;
  bool monotone = true;
  double prev = 2.0;
  for (double K : K_grid) {
    const auto above = static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), K));
    const double P = static_cast<double>(above) / static_cast<double>(M);
    curve.rows.push_back({K, P, static_cast<double>(above)});
    monotone = monotone && P <= prev;
    prev = P;
    if (K > 0.0 && above > 0) {
      xs.push_back(K * K);
      ys.push_back(std::log(P));
    }
  }
  double slope = std::numeric_limits<double>::quiet_NaN();
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      sx += xs[j];
      sy += ys[j];
      sxx += xs[j] * xs[j];
      sxy += xs[j] * ys[j];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  rep.statistics["samples"] = M;
  rep.statistics["N"] = N;
  rep.statistics["s"] = params.s;
  rep.statistics["median_norm"] = sorted[M / 2];
  rep.statistics["max_norm"] = sorted.back();
  rep.statistics["fit_points"] = xs.size();
  rep.statistics["slope_logP_vs_K2"] = std::isfinite(slope) ? nlohmann::ordered_json(slope) : nlohmann::ordered_json();
  rep.add_check("tail_non_increasing", monotone, monotone ? 1.0 : 0.0, 1.0);
  if (!K_grid.empty() && K_grid.front() == 0.0) {
    const double P0 = curve.rows.front()[1];
    rep.add_check("P_at_zero_is_one", P0 == 1.0, P0, 1.0);
  }
  rep.add_check("negative_slope", std::isfinite(slope) && slope < 0.0, std::isfinite(slope) ? slope : 0.0, 0.0,
                "least-squares slope of log P against K^2");
  rep.tables["tail"] = std::move(curve);
  return rep;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

ExperimentReport gaussian_moment_check(int m, std::size_t M, std::uint64_t seed) {
  if (m < 1 || m > 3) throw DomainError("moment order m must be 1, 2 or 3");
  if (M < 2) throw DomainError("moment check needs at least two samples");
  std::vector<double> x(M);
  for (std::size_t i = 0; i < M; ++i) {
    SampleRng rng(seed, i);
    x[i] = std::pow(std::norm(rng.complex_gaussian()), 2 * m);
  }
  const double mean = pairwise_sum(x) / static_cast<double>(M);
  std::vector<double> sq(M);
  for (std::size_t i = 0; i < M; ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
  const double var = pairwise_sum(sq) / static_cast<double>(M - 1);
  const double se = std::sqrt(var / static_cast<double>(M));
  const double exact = factorial(2 * m);

  ExperimentReport rep;
  rep.experiment = "gaussian_moment";
  rep.statistics["m"] = m;
  rep.statistics["samples"] = M;
  rep.statistics["empirical"] = mean;
  rep.statistics["stderr"] = se;
  rep.statistics["exact"] = exact;
  rep.statistics["exact_variance"] = factorial(4 * m) - exact * exact;
  rep.statistics["empirical_variance"] = var;
  const double dev = se > 0.0 ? std::abs(mean - exact) / se : 0.0;
  rep.add_check("moment_within_4_sigma", dev < 4.0, dev, 4.0, "|mean - (2m)!| / stderr");
  return rep;
}

double quartic_tail_bound(double alpha_value, int N) { return 4.0 * std::exp(-std::sqrt(alpha_value * N) / 120.0); }

ExperimentReport quartic_tail_check(int N, const std::vector<double>& alpha_grid, std::size_t M, std::uint64_t seed) {
  if (N < 1) throw DomainError("quartic tail needs N >= 1");
  if (M < 1) throw DomainError("quartic tail needs samples");
  for (double a : alpha_grid) {
    if (!(a > 0.0)) throw DomainError("alpha grid must be positive");
  }
  std::vector<double> S(M);
  for (std::size_t i = 0; i < M; ++i) {
    SampleRng rng(seed, i);
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
      const double q = std::norm(rng.complex_gaussian());
      s += q * q;
    }
    S[i] = s;
  }
  ExperimentReport rep;
  rep.experiment = "quartic_tail";
  rep.statistics["N"] = N;
  rep.statistics["samples"] = M;
  Table t;
  t.columns = {"alpha", "N", "frequency", "bound", "binomial_sigma"};
  bool bound_ok = true, exact_ok = true;
  double worst_exact = 0.0;
  for (double a : alpha_grid) {
    const auto hits = std::count_if(S.begin(), S.end(), [&](double s) { return s >= a * N; });
    const double freq = static_cast<double>(hits) / static_cast<double>(M);
    const double b = quartic_tail_bound(a, N);
    const double bc = std::min(b, 1.0);
    const double sigma = std::sqrt(bc * (1.0 - bc) / static_cast<double>(M));
    t.rows.push_back({a, static_cast<double>(N), freq, b, sigma});
    if (a > 1600.0 && freq > b + 4.0 * sigma) bound_ok = false;
    if (N == 1) {
      // |g|^2 is Exp(1), so P(|g|^4 >= a) = exp(-sqrt(a)).
      const double p = std::exp(-std::sqrt(a));
      const double sp = std::sqrt(p * (1.0 - p) / static_cast<double>(M));
      const double dev = sp > 0.0 ? std::abs(freq - p) / sp : (freq == p ? 0.0 : INFINITY);
      worst_exact = std::max(worst_exact, dev);
      exact_ok = exact_ok && dev < 4.0;
    }
  }
  rep.add_check("tail_bound_not_violated", bound_ok, bound_ok ? 1.0 : 0.0, 1.0,
                "frequency <= bound + 4 sigma for every alpha > 1600");
  if (N == 1) rep.add_check("single_mode_exact_law", exact_ok, worst_exact, 4.0, "max |freq - exp(-sqrt(alpha))| / sigma");
  rep.tables["quartic_tail"] = std::move(t);
  return rep;
}

}  // namespace bolab
