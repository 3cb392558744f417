#pragma once

// Wiener samples, Gibbs weights and importance-sampled expectations.
//
// The Wiener measure is the law of f = sum_{n != 0} g_n / (2 sqrt(pi |n|)) e^{inx};
// the truncated Gibbs measure is theta_N d rho_N with
//   theta_N(f) = zeta(||P_{<=N} f||^2 - alpha_N) exp((1/3) int (S_N f)^3).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bolab/dynamics.hpp"
#include "bolab/parameters.hpp"
#include "bolab/report.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

/// zeta = 1 on [-a, a], 0 outside (-2a, 2a), cos^2 falloff in between.
struct ZetaProfile {
  double a = 1.0;

  double operator()(double x) const noexcept;
  std::string describe() const;
};

enum class CubicVariant {
  smooth,  ///< (S_N f)^3
  sharp,   ///< (P_{<=N} f)^3
};

std::string to_string(CubicVariant v);

/// Sample `index` of the stream `seed`, modes 1..N.
FourierState sample_wiener(int N, std::uint64_t seed, std::uint64_t index = 0);

/// alpha_N = sum_{n=1}^N 1/n.
double alpha(int N);

double gibbs_weight(const FourierState& f, int N, const ZetaProfile& zeta = {},
                    CubicVariant variant = CubicVariant::smooth, const CutoffProfile& psi = {});

struct GibbsEnsemble {
  std::vector<FourierState> samples;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  int N = 1;
  ZetaProfile zeta{};
  CubicVariant variant = CubicVariant::smooth;

  std::size_t size() const noexcept { return samples.size(); }
  /// sum w / max w.
  double effective_sample_size() const;
  /// (sum w)^2 / sum w^2.
  double kish_sample_size() const;
};

/// `workers` = 0 picks default_workers(); the result does not depend on it.
GibbsEnsemble build_ensemble(int N, std::size_t M, std::uint64_t seed, const ZetaProfile& zeta = {},
                             CubicVariant variant = CubicVariant::smooth, unsigned workers = 0);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Self-normalized estimate sum w phi / sum w with the delta-method standard error
/// sqrt(sum (w/W)^2 (phi - mean)^2). Throws DegenerateEnsemble when sum w = 0.
Estimate weighted_mean(std::span<const double> weights, std::span<const double> values);
Estimate weighted_expectation(const GibbsEnsemble& ens, const std::function<double(const FourierState&)>& observable);

struct Observable {
  std::string name;
  std::function<double(const FourierState&)> eval;
};

/// Known names: mass_N (||P_{<=N} f||^2), mass (||f||^2), re_f1, im_f1, abs_f1_sq, abs_f2_sq, energy.
/// Throws ConfigError for anything else.
Observable observable(const std::string& name, int N, const CutoffProfile& psi = {});
std::vector<std::string> default_invariance_observables();

struct InvarianceOptions {
  int N = 8;
  std::size_t M = 100000;
  double t = 0.5;
  double dt = 5e-3;
  std::uint64_t seed = 7;
  ZetaProfile zeta{};
  CubicVariant variant = CubicVariant::smooth;
  std::vector<std::string> observables = default_invariance_observables();
  unsigned workers = 0;
  double z_threshold = 3.0;
  bool per_sample_table = false;
};

/// E_nu[phi] against E_nu[phi o Phi_t^N] for each observable. The pass statistic is
/// the unpaired z = (m_t - m_0) / sqrt(se_0^2 + se_t^2); the paired z of the per-sample
/// differences is reported alongside.
ExperimentReport invariance_experiment(const InvarianceOptions& opts);

/// Empirical P(||f||_{Z1} > K) for Wiener samples at truncation N, and the
/// least-squares slope of log P against K^2 over the K > 0 with P > 0.
ExperimentReport z1_tail_curve(const std::vector<double>& K_grid, int N, std::size_t M, std::uint64_t seed,
                               const ParameterSet& params, unsigned workers = 0);

/// Empirical E|g|^{4m} against (2m)!, m in {1, 2, 3}; pass within 4 standard errors.
ExperimentReport gaussian_moment_check(int m, std::size_t M, std::uint64_t seed);

/// P(sum_{j<=N} |g_j|^4 >= alpha N) <= 4 exp(-sqrt(alpha N) / 120) for alpha > 1600.
double quartic_tail_bound(double alpha_value, int N);
ExperimentReport quartic_tail_check(int N, const std::vector<double>& alpha_grid, std::size_t M, std::uint64_t seed);

}  // namespace bolab
