#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "bolab/dynamics.hpp"
#include "bolab/errors.hpp"
#include "oracles.hpp"

using namespace bolab;
using oracle::pi;

namespace {

IntegratorConfig config(int N, double dt, int n_max = -1) {
  IntegratorConfig c;
  c.N = N == 0 ? Truncation::infinite() : Truncation::at(N);
  c.dt = dt;
  c.n_max = n_max < 0 ? N : n_max;
  return c;
}

// -i|n|n u_n + S(S u . S u_x), with the product done by direct convolution and
// Galerkin-truncated at the state's n_max.
FourierState field_oracle(const FourierState& u, Truncation N) {
  const CutoffProfile psi;
  Spectrum su(u.n_max()), sux(u.n_max());
  for (int n = -u.n_max(); n <= u.n_max(); ++n) {
    const double m = psi.multiplier(n, N);
    su.ref(n) = m * u[n];
    sux.ref(n) = m * complex(0.0, n) * u[n];
  }
  const Spectrum prod = oracle::convolve(su, sux);
  FourierState out(u.n_max());
  for (int n = 1; n <= u.n_max(); ++n) {
    const double lin = static_cast<double>(n) * n;
    out.set(n, complex(0.0, -lin) * u[n] + psi.multiplier(n, N) * prod[n]);
  }
  return out;
}

double cube_by_quadrature(const FourierState& u) {
  const auto v = oracle::grid_values(u.to_spectrum(), 4 * u.n_max() + 4);
  std::vector<double> c(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) c[j] = std::pow(v[j].real(), 3);
  return oracle::grid_integral(c);
}

double rel(const FourierState& a, const FourierState& b) { return l2_norm(a - b) / l2_norm(b); }

}  // namespace

TEST_CASE("vector field on 2 cos x") {
  FourierState u(4);
  u.set(1, 1.0);
  const FourierState v = vector_field(u, Truncation::infinite());
  // linear: -i|1|1 * 1; nonlinear: u u_x = -2 sin 2x, coefficient i at n = 2
  CHECK(std::abs(v[1] - complex(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(v[2] - complex(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(v[3]) < 1e-15);
  CHECK(std::abs(vector_field(u, Truncation::infinite(), {}, FieldPart::nonlinear)[1]) < 1e-15);
  CHECK(std::abs(vector_field(u, Truncation::infinite(), {}, FieldPart::linear)[2]) < 1e-15);
}

TEST_CASE("vector field matches the convolution oracle") {
  for (int N : {0, 4, 8, 16}) {
    const int n_max = N == 0 ? 12 : N;
    const Truncation T = N == 0 ? Truncation::infinite() : Truncation::at(N);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const FourierState u = oracle::random_state(n_max, 31 * N + seed);
      const FourierState v = vector_field(u, T);
      CHECK(oracle::max_diff(v, field_oracle(u, T)) < 1e-12);
      CHECK(v[0] == complex{});
      CHECK(v.is_finite());
    }
  }
}

TEST_CASE("field is the Hamiltonian gradient flow: E and mass are stationary along it") {
  for (int N : {4, 8, 16}) {
    const FourierState u = oracle::random_state(N, 500 + N, 0.7);
    const FourierState v = vector_field(u, Truncation::at(N));
    const double eps = 1e-6;
    const double dE = (hamiltonian(u + eps * v, Truncation::at(N)) - hamiltonian(u - eps * v, Truncation::at(N))) / (2 * eps);
    const double dM = (mass(u + eps * v) - mass(u - eps * v)) / (2 * eps);
    CHECK(std::abs(dE) < 1e-7 * (1.0 + std::abs(hamiltonian(u, Truncation::at(N)))) * l2_norm(v));
    CHECK(std::abs(dM) < 1e-7 * mass(u) * l2_norm(v));
  }
}

TEST_CASE("linear step reproduces the exact phase") {
  const IntegratorConfig c = config(16, 1e-2);
  const FourierState u = oracle::random_state(16, 2);
  const FourierState s = step_ifrk4(u, c, FieldPart::linear);
  for (int n = 1; n <= 16; ++n) {
    const complex exact = std::polar(1.0, -static_cast<double>(n) * n * c.dt) * u[n];
    CHECK(std::abs(s[n] - exact) < 1e-14);
  }
}

TEST_CASE("fourth order: error ratios under step halving") {
  const int N = 16;
  const FourierState u = oracle::random_state(N, 77, 0.5);
  const double t = 0.5;
  const FourierState ref = flow_map(u, t, config(N, 0.01 / 32));
  const double e1 = l2_norm(flow_map(u, t, config(N, 0.01)) - ref);
  const double e2 = l2_norm(flow_map(u, t, config(N, 0.005)) - ref);
  const double e3 = l2_norm(flow_map(u, t, config(N, 0.0025)) - ref);
  INFO("errors " << e1 << " " << e2 << " " << e3);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
  CHECK(e2 / e3 > 12.0);
  CHECK(e2 / e3 < 20.0);
}

TEST_CASE("conservation of mass and energy") {
  const int N = 16;
  const FourierState u = oracle::random_state(N, 4, 0.5);
  const FourierState one = step_ifrk4(u, config(N, 1e-3));
  CHECK(std::abs(mass(one) - mass(u)) < 1e-12 * mass(u));

  const TrajectoryRecord rec = flow(u, 1.0, config(N, 1e-3));
  CHECK(rec.times.back() == doctest::Approx(1.0).epsilon(1e-14));
  const double m0 = rec.mass.front();
  const double e0 = rec.energy.front();
  double dm = 0.0, de = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    dm = std::max(dm, std::abs(rec.mass[i] - m0) / m0);
    de = std::max(de, std::abs(rec.energy[i] - e0) / std::abs(e0));
    CHECK(rec.mass[i] == doctest::Approx(mass(rec.states[i])).epsilon(1e-14));
  }
  CHECK(dm < 1e-10);
  CHECK(de < 1e-8);
  for (std::size_t i = 1; i < rec.size(); ++i) CHECK(rec.times[i] > rec.times[i - 1]);
}

TEST_CASE("flow: identity at t = 0, group property, reversibility") {
  const int N = 8;
  const IntegratorConfig c = config(N, 1e-3);
  const FourierState u = oracle::random_state(N, 21, 0.5);
  CHECK(oracle::max_diff(flow_map(u, 0.0, c), u) == 0.0);

  const FourierState a = flow_map(flow_map(u, 0.3, c), 0.2, c);
  const FourierState b = flow_map(u, 0.5, c);
  CHECK(rel(a, b) < 1e-9);

  const FourierState back = flow_map(flow_map(u, 0.5, c), -0.5, c);
  CHECK(rel(back, u) < 1e-9);

  const TrajectoryRecord rec = flow(u, 0.05, c, FlowOptions{10});
  CHECK(rec.size() == 6);
  CHECK(oracle::max_diff(rec.final_state(), flow_map(u, 0.05, c)) == 0.0);
}

TEST_CASE("spectral support is preserved") {
  const int N = 8;
  const IntegratorConfig c = config(N, 1e-3, 24);
  const FourierState u = oracle::random_state(24, 9, 0.5, N);
  const TrajectoryRecord rec = flow(u, 1.0, c, FlowOptions{50});
  for (std::size_t i = 0; i < rec.size(); ++i) {
    CHECK(rec.leak[i] < 1e-12);
    for (int n = N + 1; n <= 24; ++n) CHECK(std::abs(rec.states[i][n]) < 1e-12);
  }
}

TEST_CASE("fit_steps and config validation") {
  auto [k, h] = fit_steps(1.0, 3e-1);
  CHECK(k == 4);
  CHECK(h == doctest::Approx(0.25));
  auto [k2, h2] = fit_steps(-0.5, 1e-1);
  CHECK(k2 == 5);
  CHECK(h2 == doctest::Approx(-0.1));
  CHECK(fit_steps(0.0, 0.1).first == 0);

  IntegratorConfig bad = config(8, 0.0);
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = config(8, 1e-3, 4);
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_NOTHROW(config(8, 1e-3, 12).validate());
}

TEST_CASE("non-finite state aborts with the last finite state") {
  const int N = 8;
  FourierState u = oracle::random_state(N, 1, 1e150);
  Ifrk4Stepper st(config(N, 1e-2));
  try {
    st.advance(u, 1.0);
    FAIL("expected NonFiniteState");
  } catch (const NonFiniteState& e) {
    CHECK(e.last_finite().is_finite());
    CHECK(e.time() >= 0.0);
  }
}

TEST_CASE("Hamiltonian") {
  CHECK(hamiltonian(FourierState(4), Truncation::at(4)) == 0.0);
  FourierState u(4);
  u.set(1, 1.0);  // 2 cos x: quadratic part 2 pi, cubic part 0
  CHECK(hamiltonian(u, Truncation::infinite()) == doctest::Approx(2.0 * pi).epsilon(1e-14));

  for (int N : {4, 8, 16}) {
    const FourierState r = oracle::random_state(N, 300 + N);
    const FourierState s = smooth_truncation(r, Truncation::at(N));
    double quad = 0.0;
    for (int n = 1; n <= N; ++n) quad += 2.0 * pi * n * std::norm(r[n]);
    const double expect = quad - cube_by_quadrature(s.resized(N)) / 6.0;
    CHECK(hamiltonian(r, Truncation::at(N)) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("mass and symplectic pairing") {
  CHECK(mass(FourierState(3)) == 0.0);
  FourierState u(3);
  u.set(1, 1.0);
  CHECK(mass(u) == doctest::Approx(4.0 * pi).epsilon(1e-15));
  const FourierState r = oracle::random_state(20, 5);
  CHECK(mass(hilbert_transform(r)) == doctest::Approx(mass(r)).epsilon(1e-14));

  FourierState c(2), s(2);
  c.set(1, 0.5);                 // cos x
  s.set(1, complex(0.0, -0.5));  // sin x
  // int cos x * (-cos x) = -pi
  CHECK(symplectic_pairing(c, s) == doctest::Approx(-pi).epsilon(1e-14));
  CHECK(symplectic_pairing(s, c) == doctest::Approx(pi).epsilon(1e-14));

  const FourierState a = oracle::random_state(10, 6);
  const FourierState b = oracle::random_state(10, 7);
  CHECK(std::abs(symplectic_pairing(a, a)) < 1e-14);
  CHECK(symplectic_pairing(a, b) == doctest::Approx(-symplectic_pairing(b, a)).epsilon(1e-13));

  // quadrature: int a * d_x^{-1} b
  const auto av = oracle::grid_values(a.to_spectrum(), 64);
  const auto bv = oracle::grid_values(antiderivative(b).to_spectrum(), 64);
  std::vector<double> p(64);
  for (std::size_t j = 0; j < 64; ++j) p[j] = av[j].real() * bv[j].real();
  CHECK(symplectic_pairing(a, b) == doctest::Approx(oracle::grid_integral(p)).epsilon(1e-12));
}

TEST_CASE("Liouville: the truncated field is divergence free") {
  const int N = 8;
  const FourierState r = oracle::random_state(N, 1);
  CHECK(divergence_check(r, Truncation::at(N), 1e-5, {}, FieldPart::linear) < 1e-10);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FourierState u = oracle::random_state(N, 1000 + seed);
    const double d1 = divergence_check(u, Truncation::at(N), 1e-5);
    const double d2 = divergence_check(u, Truncation::at(N), 5e-6);
    CHECK(d1 < 1e-6);
    CHECK(std::abs(d1 - d2) < 1e-6);
  }
}
