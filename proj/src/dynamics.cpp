#include "bolab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bolab/errors.hpp"
#include "transform.hpp"

namespace bolab {
namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

std::vector<double> psi_table(int n_max, Truncation N, const CutoffProfile& psi) {
  std::vector<double> t(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) t[static_cast<std::size_t>(n)] = psi.multiplier(n, N);
  return t;
}

int active_band(int n_max, Truncation N, const CutoffProfile& psi) {
  const int r = psi.support_radius(N);
  return r < 0 ? n_max : std::min(n_max, r);
}

// out[n] = psi_n [ (psi u)(psi u_x) ]_n  for n = 1..band, zero above.
void nonlinear_term(std::span<const complex> u, const std::vector<double>& psi, int band,
                    std::vector<complex>& su, std::vector<complex>& sux, std::vector<complex>& prod,
                    detail::RealProductScratch& scratch, std::span<complex> out) {
  std::fill(out.begin(), out.end(), complex{});
  if (band < 1) return;
  su.assign(static_cast<std::size_t>(band) + 1, complex{});
  sux.assign(static_cast<std::size_t>(band) + 1, complex{});
  prod.assign(static_cast<std::size_t>(band) + 1, complex{});
  for (int n = 1; n <= band; ++n) {
    const auto k = static_cast<std::size_t>(n);
    su[k] = psi[k] * u[k];
    sux[k] = complex(0.0, n) * su[k];
  }
  detail::real_product(su, band, sux, band, prod, band, scratch);
  for (int n = 1; n <= band; ++n) {
    const auto k = static_cast<std::size_t>(n);
    out[k] = psi[k] * prod[k];
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive and finite");
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  if (!N.is_infinite() && n_max < N.value()) {
    throw DomainError("n_max = " + std::to_string(n_max) + " is below the truncation N = " + N.to_string());
  }
}

NonFiniteState::NonFiniteState(FourierState last_finite, double time)
    : std::runtime_error("non-finite coefficient after t = " + std::to_string(time)),
      last_(std::move(last_finite)),
      time_(time) {}

struct Ifrk4Stepper::Scratch {
  detail::RealProductScratch product;
};

Ifrk4Stepper::Ifrk4Stepper(const IntegratorConfig& cfg, FieldPart part)
    : cfg_(cfg),
      part_(part),
      band_(0),
      k1_(cfg.n_max),
      k2_(cfg.n_max),
      k3_(cfg.n_max),
      k4_(cfg.n_max),
      tmp_(cfg.n_max),
      scratch_(std::make_unique<Scratch>()) {
  cfg_.validate();
  psi_ = psi_table(cfg_.n_max, cfg_.N, cfg_.psi);
  band_ = active_band(cfg_.n_max, cfg_.N, cfg_.psi);
  e_full_.assign(static_cast<std::size_t>(cfg_.n_max) + 1, 1.0);
  e_half_.assign(static_cast<std::size_t>(cfg_.n_max) + 1, 1.0);
}

Ifrk4Stepper::~Ifrk4Stepper() = default;
Ifrk4Stepper::Ifrk4Stepper(Ifrk4Stepper&&) noexcept = default;
Ifrk4Stepper& Ifrk4Stepper::operator=(Ifrk4Stepper&&) noexcept = default;

void Ifrk4Stepper::refresh_phases(double h) {
  if (h == phase_h_) return;
  phase_h_ = h;
  const bool rotate = part_ != FieldPart::nonlinear;
  for (int n = 0; n <= cfg_.n_max; ++n) {
    const double w = rotate ? static_cast<double>(n) * n : 0.0;
    const auto k = static_cast<std::size_t>(n);
    e_full_[k] = std::polar(1.0, -w * h);
    e_half_[k] = std::polar(1.0, -w * h / 2);
  }
}

void Ifrk4Stepper::nonlinear(const FourierState& u, FourierState& out) {
  if (part_ == FieldPart::linear) {
    std::fill(out.positive_modes().begin(), out.positive_modes().end(), complex{});
    return;
  }
  nonlinear_term(u.positive_modes(), psi_, band_, su_, sux_, prod_, scratch_->product, out.positive_modes());
}

void Ifrk4Stepper::step(FourierState& u, double h) {
  if (u.n_max() != cfg_.n_max) throw DomainError("state resolution does not match the integrator");
  refresh_phases(h);
  const int M = cfg_.n_max;
  auto U = u.positive_modes();
  auto A = k1_.positive_modes(), B = k2_.positive_modes(), C = k3_.positive_modes(), D = k4_.positive_modes();
  auto T = tmp_.positive_modes();

  nonlinear(u, k1_);
  for (int n = 1; n <= M; ++n) A[n] *= h;

  for (int n = 1; n <= M; ++n) T[n] = e_half_[n] * (U[n] + 0.5 * A[n]);
  nonlinear(tmp_, k2_);
  for (int n = 1; n <= M; ++n) B[n] *= h;

  for (int n = 1; n <= M; ++n) T[n] = e_half_[n] * U[n] + 0.5 * B[n];
  nonlinear(tmp_, k3_);
  for (int n = 1; n <= M; ++n) C[n] *= h;

  for (int n = 1; n <= M; ++n) T[n] = e_full_[n] * U[n] + e_half_[n] * C[n];
  nonlinear(tmp_, k4_);
  for (int n = 1; n <= M; ++n) D[n] *= h;

  for (int n = 1; n <= M; ++n) {
    U[n] = e_full_[n] * U[n] + (e_full_[n] * A[n] + 2.0 * e_half_[n] * (B[n] + C[n]) + D[n]) / 6.0;
  }
}

void Ifrk4Stepper::advance(FourierState& u, double t) {
  const auto [steps, h] = fit_steps(t, cfg_.dt);
  FourierState last = u;
  for (long k = 0; k < steps; ++k) {
    step(u, h);
    if (!u.is_finite()) throw NonFiniteState(last, h * static_cast<double>(k));
    last = u;
  }
}

std::pair<long, double> fit_steps(double t, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!std::isfinite(t)) throw DomainError("flow time must be finite");
  if (t == 0.0) return {0, 0.0};
  const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(t) / dt - 1e-9)));
  return {steps, t / static_cast<double>(steps)};
}

FourierState vector_field(const FourierState& u, Truncation N, const CutoffProfile& psi, FieldPart part) {
  const int M = u.n_max();
  FourierState out(M);
  auto O = out.positive_modes();
  if (part != FieldPart::linear) {
    std::vector<complex> su, sux, prod;
    detail::RealProductScratch scratch;
    nonlinear_term(u.positive_modes(), psi_table(M, N, psi), active_band(M, N, psi), su, sux, prod, scratch, O);
  }
  if (part != FieldPart::nonlinear) {
    const auto U = u.positive_modes();
    for (int n = 1; n <= M; ++n) O[n] += complex(0.0, -static_cast<double>(n) * n) * U[n];
  }
  return out;
}

FourierState step_ifrk4(const FourierState& u, const IntegratorConfig& cfg, FieldPart part) {
  Ifrk4Stepper stepper(cfg, part);
  FourierState v = u.resized(cfg.n_max);
  stepper.step(v, cfg.dt);
  return v;
}

namespace {

double leak_of(const FourierState& u, Truncation N) {
  if (N.is_infinite()) return 0.0;
  double m = 0.0;
  for (int n = N.value() + 1; n <= u.n_max(); ++n) m = std::max(m, std::abs(u[n]));
  return m;
}

FourierState prepared(const FourierState& u0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (u0.bandwidth() > cfg.n_max) {
    throw DomainError("initial state has modes above n_max = " + std::to_string(cfg.n_max));
  }
  if (!u0.is_finite()) throw DomainError("initial state is not finite");
  return u0.resized(cfg.n_max);
}

}  // namespace

TrajectoryRecord flow(const FourierState& u0, double t, const IntegratorConfig& cfg, const FlowOptions& opts) {
  if (opts.record_every < 1) throw DomainError("record_every must be at least 1");
  FourierState u = prepared(u0, cfg);
  Ifrk4Stepper stepper(cfg);
  const auto [steps, h] = fit_steps(t, cfg.dt);

  TrajectoryRecord rec;
  auto record = [&](double time) {
    rec.times.push_back(time);
    rec.states.push_back(u);
    rec.mass.push_back(mass(u));
    rec.energy.push_back(hamiltonian(u, cfg.N, cfg.psi));
    rec.leak.push_back(leak_of(u, cfg.N));
  };
  record(0.0);
  FourierState last = u;
  for (long k = 1; k <= steps; ++k) {
    stepper.step(u, h);
    if (!u.is_finite()) throw NonFiniteState(last, h * static_cast<double>(k - 1));
    last = u;
    if (k % opts.record_every == 0 || k == steps) record(h * static_cast<double>(k));
  }
  return rec;
}

FourierState flow_map(const FourierState& u0, double t, const IntegratorConfig& cfg) {
  FourierState u = prepared(u0, cfg);
  Ifrk4Stepper stepper(cfg);
  stepper.advance(u, t);
  return u;
}

double hamiltonian(const FourierState& u, Truncation N, const CutoffProfile& psi) {
  double quad = 0.0;
  for (int n = 1; n <= u.n_max(); ++n) quad += n * std::norm(u[n]);
  return two_pi * quad - integrate_cube(smooth_truncation(u, N, psi)) / 6.0;
}

double mass(const FourierState& u) {
  double s = 0.0;
  for (int n = 1; n <= u.n_max(); ++n) s += std::norm(u[n]);
  return 2.0 * two_pi * s;
}

double symplectic_pairing(const FourierState& u, const FourierState& v) {
  return integrate_product(u, antiderivative(v));
}

double divergence_check(const FourierState& u, Truncation N, double h, const CutoffProfile& psi, FieldPart part) {
  if (!(h > 0.0)) throw DomainError("difference step must be positive");
  const int K = N.is_infinite() ? u.n_max() : N.value();
  if (K < 1) throw DomainError("divergence check needs at least one mode");
  const FourierState base = u.resized(K);
  const int D = 2 * K;

  double trace = 0.0, frob = 0.0;
  for (int j = 0; j < D; ++j) {
    const int n = j / 2 + 1;
    const complex e = (j % 2 == 0) ? complex(h, 0.0) : complex(0.0, h);
    FourierState plus = base, minus = base;
    plus.set(n, base[n] + e);
    minus.set(n, base[n] - e);
    const FourierState fp = vector_field(plus, N, psi, part);
    const FourierState fm = vector_field(minus, N, psi, part);
    for (int i = 0; i < D; ++i) {
      const int m = i / 2 + 1;
      const complex d = (fp[m] - fm[m]) / (2.0 * h);
      const double Jij = (i % 2 == 0) ? d.real() : d.imag();
      frob += Jij * Jij;
      if (i == j) trace += Jij;
    }
  }
  return std::abs(trace) / (std::sqrt(frob) + 1.0);
}

}  // namespace bolab
