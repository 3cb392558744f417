#pragma once

// The truncated flow
//   u_t + H u_xx = S_N( S_N u * S_N u_x ),
// its Hamiltonian structure, and an integrating-factor RK4 integrator.

#include <memory>
#include <stdexcept>
#include <vector>

#include "bolab/spectral.hpp"

namespace bolab {

struct IntegratorConfig {
  double dt = 1e-3;
  Truncation N = Truncation::infinite();
  int n_max = 16;  ///< resolution; must be >= N when N is finite
  CutoffProfile psi{};

  /// Throws DomainError on dt <= 0, n_max < 1 or n_max < N.
  void validate() const;
};

/// A coefficient became NaN/Inf. Carries the last finite state and its time.
class NonFiniteState : public std::runtime_error {
 public:
  NonFiniteState(FourierState last_finite, double time);
  const FourierState& last_finite() const noexcept { return last_; }
  double time() const noexcept { return time_; }

 private:
  FourierState last_;
  double time_;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<FourierState> states;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> leak;  ///< max |u_n| over N < |n| <= n_max (0 when N is infinite)

  std::size_t size() const noexcept { return times.size(); }
  const FourierState& final_state() const { return states.back(); }
};

enum class FieldPart { full, linear, nonlinear };

/// -H u_xx + S_N(S_N u * S_N u_x), i.e. -i|n|n u_n plus the truncated nonlinearity.
/// The result has the same n_max as `u`; for infinite N the product is Galerkin-truncated there.
FourierState vector_field(const FourierState& u, Truncation N, const CutoffProfile& psi = {},
                          FieldPart part = FieldPart::full);

/// Integrating-factor RK4 for the truncated flow. Holds the phase tables and
/// scratch buffers, so keep one per worker and reuse it.
class Ifrk4Stepper {
 public:
  explicit Ifrk4Stepper(const IntegratorConfig& cfg, FieldPart part = FieldPart::full);
  ~Ifrk4Stepper();
  Ifrk4Stepper(Ifrk4Stepper&&) noexcept;
  Ifrk4Stepper& operator=(Ifrk4Stepper&&) noexcept;

  /// Advance `u` (n_max == cfg.n_max) by one step of size `h` (negative h runs backwards).
  void step(FourierState& u, double h);
  /// Advance by |t|/dt equal steps, dt shrunk to fit. Throws NonFiniteState.
  void advance(FourierState& u, double t);

  const IntegratorConfig& config() const noexcept { return cfg_; }

 private:
  void nonlinear(const FourierState& u, FourierState& out);
  void refresh_phases(double h);

  IntegratorConfig cfg_;
  FieldPart part_;
  std::vector<double> psi_;  // psi(n/N), n = 0..n_max
  int band_;                 // largest n with psi(n/N) > 0, capped at n_max
  double phase_h_ = 0.0;
  std::vector<complex> e_full_, e_half_;
  FourierState k1_, k2_, k3_, k4_, tmp_;
  std::vector<complex> su_, sux_, prod_;
  struct Scratch;
  std::unique_ptr<Scratch> scratch_;
};

/// Number of equal steps and the fitted step size used to cover |t| with steps <= dt.
std::pair<long, double> fit_steps(double t, double dt);

/// One IFRK4 step of size cfg.dt.
FourierState step_ifrk4(const FourierState& u, const IntegratorConfig& cfg, FieldPart part = FieldPart::full);

struct FlowOptions {
  int record_every = 1;  ///< keep every k-th step (the final state is always kept)
};

/// The time-t map Phi_t^N with per-step diagnostics.
TrajectoryRecord flow(const FourierState& u0, double t, const IntegratorConfig& cfg, const FlowOptions& opts = {});
/// End state of the flow only.
FourierState flow_map(const FourierState& u0, double t, const IntegratorConfig& cfg);

/// E_N[u] = int (1/2)|d_x^{1/2} u|^2 - (1/6)(S_N u)^3.
double hamiltonian(const FourierState& u, Truncation N, const CutoffProfile& psi = {});
/// int u^2 = 2 pi sum |u_n|^2.
double mass(const FourierState& u);
/// omega(u, v) = int u * d_x^{-1} v.
double symplectic_pairing(const FourierState& u, const FourierState& v);

/// Central-difference Jacobian of the field on V_N = R^{2N} (coordinates Re u_n, Im u_n,
/// 0 < n <= N); returns |trace| / (||J||_F + 1). For infinite N the first u.n_max() modes are used.
double divergence_check(const FourierState& u, Truncation N, double h, const CutoffProfile& psi = {},
                        FieldPart part = FieldPart::full);

}  // namespace bolab
