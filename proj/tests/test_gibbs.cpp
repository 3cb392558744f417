#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bolab/errors.hpp"
#include "bolab/gibbs.hpp"
#include "bolab/random.hpp"
#include "oracles.hpp"

using namespace bolab;
using oracle::pi;

namespace {

const Check& check_named(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  FAIL("missing check " << name);
  throw std::logic_error("unreachable");
}

// Sample mean and standard error of a plain (unweighted) sample.
std::pair<double, double> mean_se(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  s /= static_cast<double>(x.size() - 1);
  return {m, std::sqrt(s / static_cast<double>(x.size()))};
}

FourierState single_mode(double coefficient_sq_sum_target, bool odd) {
  // mass of a single mode n = 1 is 4 pi |c|^2
  FourierState f(1);
  const double c = std::sqrt(coefficient_sq_sum_target / (4.0 * pi));
  f.set(1, odd ? complex(0.0, c) : complex(c, 0.0));
  return f;
}

}  // namespace

TEST_CASE("alpha_N") {
  CHECK(alpha(1) == 1.0);
  CHECK(alpha(2) == 1.5);
  CHECK(alpha(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
  CHECK_THROWS_AS(alpha(0), DomainError);
}

TEST_CASE("zeta profile") {
  const ZetaProfile z{1.0};
  CHECK(z(0.0) == 1.0);
  CHECK(z(1.0) == 1.0);
  CHECK(z(-1.0) == 1.0);
  CHECK(z(2.0) == 0.0);
  CHECK(z(-3.0) == 0.0);
  CHECK(z(1.5) == doctest::Approx(0.5));
  for (int i = 0; i <= 40; ++i) {
    const double x = -2.5 + 5.0 * i / 40.0;
    CHECK(z(x) == z(-x));
    CHECK(z(x) >= 0.0);
    CHECK(z(x) <= 1.0);
  }
  const ZetaProfile wide{3.0};
  CHECK(wide(3.0) == 1.0);
  CHECK(wide(5.9) > 0.0);
  CHECK(wide(6.0) == 0.0);
  CHECK(z.describe().find("a=1") != std::string::npos);
}

TEST_CASE("Wiener samples") {
  const FourierState f = sample_wiener(16, 3, 5);
  CHECK(f.n_max() == 16);
  CHECK(f[0] == complex{});
  CHECK(f[-3] == std::conj(f[3]));
  CHECK(oracle::max_diff(f, sample_wiener(16, 3, 5)) == 0.0);
  CHECK(oracle::max_diff(f, sample_wiener(16, 3, 6)) > 0.0);
  CHECK(oracle::max_diff(f, sample_wiener(16, 4, 5)) > 0.0);
  CHECK_THROWS_AS(sample_wiener(0, 1), DomainError);

  // f_n = g_n / (2 sqrt(pi n)) with the same g as the stream's complex gaussians
  SampleRng rng(3, 5);
  for (int n = 1; n <= 16; ++n) {
    const complex g = rng.complex_gaussian();
    CHECK(std::abs(f[n] - g / (2.0 * std::sqrt(pi * n))) < 1e-16);
  }
}

TEST_CASE("sampler calibration") {
  const std::size_t M = 20000;
  for (int N : {4, 16, 64}) {
    std::vector<double> m(M), v1(M), r1(M);
    for (std::size_t i = 0; i < M; ++i) {
      const FourierState f = sample_wiener(N, 17, i);
      m[i] = mass(f);
      v1[i] = std::norm(f[1]);
      r1[i] = f[1].real();
    }
    const auto [mm, ms] = mean_se(m);
    CHECK(std::abs(mm - alpha(N)) < 3.0 * ms);
    const auto [vm, vs] = mean_se(v1);
    CHECK(std::abs(vm - 1.0 / (4.0 * pi)) < 3.0 * vs);
    const auto [rm, rs] = mean_se(r1);
    CHECK(std::abs(rm) < 3.0 * rs);
  }
}

TEST_CASE("Gibbs weight") {
  const ZetaProfile z{1.0};
  for (int N : {1, 4, 8}) {
    // outside supp zeta
    FourierState far = single_mode(alpha(N) + 3.0, false).resized(N);
    CHECK(gibbs_weight(far, N, z) == 0.0);
    // odd function on the plateau: int (S f)^3 = 0, zeta = 1
    FourierState odd = single_mode(alpha(N), true).resized(N);
    CHECK(gibbs_weight(odd, N, z) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gibbs_weight(odd, N, z, CubicVariant::sharp) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // f = 0 gives zeta(-alpha_N)
  CHECK(gibbs_weight(FourierState(1), 1, z) == 1.0);
  CHECK(gibbs_weight(FourierState(2), 2, z) == doctest::Approx(0.5));
  CHECK(gibbs_weight(FourierState(4), 4, z) == 0.0);

  // random samples against an independent evaluation
  const CutoffProfile psi;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const int N = 8;
    const FourierState f = sample_wiener(N, 99, i);
    double m = 0.0;
    for (int n = 1; n <= N; ++n) m += 4.0 * pi * std::norm(f[n]);
    Spectrum sf(N), pf(N);
    for (int n = -N; n <= N; ++n) {
      sf.ref(n) = psi.multiplier(n, Truncation::at(N)) * f[n];
      pf.ref(n) = f[n];
    }
    auto cube = [](const Spectrum& s) {
      const auto v = oracle::grid_values(s, 64);
      std::vector<double> c(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) c[j] = std::pow(v[j].real(), 3);
      return oracle::grid_integral(c);
    };
    const double expect_smooth = z(m - alpha(N)) * std::exp(cube(sf) / 3.0);
    const double expect_sharp = z(m - alpha(N)) * std::exp(cube(pf) / 3.0);
    CHECK(gibbs_weight(f, N, z) == doctest::Approx(expect_smooth).epsilon(1e-12));
    CHECK(gibbs_weight(f, N, z, CubicVariant::sharp) == doctest::Approx(expect_sharp).epsilon(1e-12));
  }

  // modes above N are ignored by the mass term
  FourierState wide = sample_wiener(12, 5, 0);
  CHECK(gibbs_weight(wide, 4, z) == doctest::Approx(gibbs_weight(wide.resized(4), 4, z)).epsilon(1e-14));
}

TEST_CASE("ensembles: reproducible, worker independent, finite") {
  const GibbsEnsemble a = build_ensemble(8, 3000, 11, {}, CubicVariant::smooth, 1);
  const GibbsEnsemble b = build_ensemble(8, 3000, 11, {}, CubicVariant::smooth, 3);
  REQUIRE(a.size() == 3000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.weights[i] == b.weights[i]);
    CHECK(std::isfinite(a.weights[i]));
    CHECK(a.weights[i] >= 0.0);
    CHECK(a.samples[i].n_max() == 8);
  }
  for (int N : {4, 8, 16}) {
    const GibbsEnsemble e = build_ensemble(N, 5000, 2);
    CHECK(e.effective_sample_size() > 1.0);
    CHECK(e.kish_sample_size() > 1.0);
    CHECK(e.kish_sample_size() <= 5000.0 * (1.0 + 1e-12));
  }
}

TEST_CASE("self-normalized estimator") {
  const std::vector<double> w{0.5, 1.0, 2.0, 0.0, 3.5};
  const std::vector<double> c(5, 4.25);
  const Estimate ec = weighted_mean(w, c);
  CHECK(ec.mean == doctest::Approx(4.25).epsilon(1e-15));
  CHECK(ec.std_error == 0.0);

  const std::vector<double> x{1.0, -2.0, 3.0, 100.0, 0.5};
  std::vector<double> w2(w), w3(w);
  for (auto& v : w2) v *= 2.0;
  for (auto& v : w3) v *= 0.37;
  const Estimate e1 = weighted_mean(w, x);
  CHECK(weighted_mean(w2, x).mean == e1.mean);
  CHECK(weighted_mean(w2, x).std_error == e1.std_error);
  CHECK(weighted_mean(w3, x).mean == doctest::Approx(e1.mean).epsilon(1e-15));
  // direct formula
  const double W = 7.0;
  const double m = (0.5 * 1.0 + 1.0 * -2.0 + 2.0 * 3.0 + 3.5 * 0.5) / W;
  double v = 0.0;
  for (std::size_t i = 0; i < 5; ++i) v += (w[i] / W) * (w[i] / W) * (x[i] - m) * (x[i] - m);
  CHECK(e1.mean == doctest::Approx(m).epsilon(1e-15));
  CHECK(e1.std_error == doctest::Approx(std::sqrt(v)).epsilon(1e-14));

  const std::vector<double> zero(5, 0.0);
  CHECK_THROWS_AS(weighted_mean(zero, x), DegenerateEnsemble);
  CHECK_THROWS_AS(weighted_mean(std::vector<double>{1.0}, x), DomainError);

  // Re f_1 under raw rho averages to 0
  GibbsEnsemble raw;
  for (std::size_t i = 0; i < 20000; ++i) {
    raw.samples.push_back(sample_wiener(4, 8, i));
    raw.weights.push_back(1.0);
  }
  const Estimate r = weighted_expectation(raw, observable("re_f1", 4).eval);
  CHECK(std::abs(r.mean) < 3.0 * r.std_error);
  CHECK(r.std_error > 0.0);
}

TEST_CASE("observables") {
  const FourierState f = sample_wiener(8, 1, 1);
  CHECK(observable("mass_N", 4).eval(f) == doctest::Approx(mass(f.resized(4))));
  CHECK(observable("mass", 4).eval(f) == doctest::Approx(mass(f)));
  CHECK(observable("re_f1", 4).eval(f) == f[1].real());
  CHECK(observable("im_f1", 4).eval(f) == f[1].imag());
  CHECK(observable("abs_f1_sq", 4).eval(f) == doctest::Approx(std::norm(f[1])));
  CHECK(observable("abs_f2_sq", 4).eval(f) == doctest::Approx(std::norm(f[2])));
  CHECK(observable("energy", 8).eval(f) == doctest::Approx(hamiltonian(f, Truncation::at(8))));
  CHECK_THROWS_AS(observable("momentum", 4), ConfigError);
  CHECK(default_invariance_observables() == std::vector<std::string>{"mass_N", "re_f1", "abs_f2_sq"});
}

TEST_CASE("invariance at t = 0 is trivial") {
  InvarianceOptions o;
  o.N = 4;
  o.M = 2000;
  o.t = 0.0;
  o.observables = {"mass_N", "re_f1", "abs_f2_sq", "energy"};
  const ExperimentReport r = invariance_experiment(o);
  CHECK(r.passed());
  for (const auto& row : r.statistics["observables"]) {
    CHECK(row["z"].get<double>() == 0.0);
    CHECK(row["mean_0"].get<double>() == row["mean_t"].get<double>());
  }
}

TEST_CASE("invariance over a grid of N and t") {
  for (int N : {4, 8, 16}) {
    for (double t : {0.25, 0.5, 1.0}) {
      InvarianceOptions o;
      o.N = N;
      o.M = 20000;
      o.t = t;
      o.seed = 1000 + static_cast<std::uint64_t>(N);
      o.observables = {"mass_N", "re_f1", "abs_f2_sq", "mass"};
      const ExperimentReport r = invariance_experiment(o);
      INFO("N=" << N << " t=" << t << " " << r.to_json()["checks"].dump());
      CHECK(r.passed());
      CHECK(r.statistics["censored_samples"].get<std::size_t>() == 0);
      // mass is conserved pathwise, up to the integrator error of the worst sample at dt = 5e-3
      CHECK(r.statistics["max_relative_mass_drift"].get<double>() < 1e-6);
      for (const auto& row : r.statistics["observables"]) {
        if (row["name"] == "mass") CHECK(std::abs(row["z"].get<double>()) < 1e-4);
      }
    }
  }
}

TEST_CASE("invariance statistics do not depend on the worker count") {
  InvarianceOptions o;
  o.N = 8;
  o.M = 3000;
  o.workers = 1;
  const std::string a = invariance_experiment(o).statistics.dump();
  o.workers = 4;
  const std::string b = invariance_experiment(o).statistics.dump();
  CHECK(a == b);
}

TEST_CASE("Z1 tail curve") {
  const ParameterSet p = parameter_set(0.1);
  const ExperimentReport r = z1_tail_curve({}, 64, 20000, 3, p);
  CHECK(r.passed());
  CHECK(check_named(r, "negative_slope").value < 0.0);
  CHECK(check_named(r, "P_at_zero_is_one").passed);

  const ExperimentReport g = z1_tail_curve({0.0, 0.5, 1.0, 1.5, 2.0}, 16, 5000, 3, p);
  CHECK(check_named(g, "tail_non_increasing").passed);
  CHECK_THROWS_AS(z1_tail_curve({1.0, 0.5}, 16, 10, 3, p), DomainError);
}

TEST_CASE("Gaussian moments") {
  for (int m : {1, 2, 3}) {
    const ExperimentReport r = gaussian_moment_check(m, 200000, 5);
    INFO(r.to_json().dump());
    CHECK(r.passed());
  }
  CHECK(gaussian_moment_check(1, 1000, 1).statistics["exact"].get<double>() == 2.0);
  CHECK(gaussian_moment_check(2, 1000, 1).statistics["exact"].get<double>() == 24.0);
  // same law from two seeds
  const double a = gaussian_moment_check(1, 200000, 1).statistics["empirical"].get<double>();
  const double b = gaussian_moment_check(1, 200000, 2).statistics["empirical"].get<double>();
  CHECK(std::abs(a - b) < 0.05);
  CHECK_THROWS_AS(gaussian_moment_check(4, 100, 1), DomainError);
}

TEST_CASE("quartic tail") {
  CHECK(quartic_tail_bound(1700, 4) == doctest::Approx(4.0 * std::exp(-std::sqrt(6800.0) / 120.0)));
  for (double a = 1.0; a < 5000.0; a *= 1.7) CHECK(quartic_tail_bound(a * 1.7, 3) < quartic_tail_bound(a, 3));

  // one mode: |g|^2 is Exp(1), P(|g|^4 >= 2) = e^{-sqrt 2}
  const ExperimentReport r1 = quartic_tail_check(1, {2.0, 10.0, 1700.0}, 100000, 9);
  CHECK(r1.passed());
  const auto& rows = r1.tables.at("quartic_tail").rows;
  CHECK(rows[0][2] == doctest::Approx(std::exp(-std::sqrt(2.0))).epsilon(0.02));
  CHECK(rows[2][2] == 0.0);

  const ExperimentReport r4 = quartic_tail_check(4, {1700.0, 2000.0}, 100000, 9);
  CHECK(r4.passed());
  CHECK(r4.tables.at("quartic_tail").rows[0][2] == 0.0);
  CHECK_THROWS_AS(quartic_tail_check(1, {0.0}, 10, 1), DomainError);
}
