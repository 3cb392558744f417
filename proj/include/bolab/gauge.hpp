#pragma once

// The gauge transform w = P_+(M u), M = e^{-iP/2}, built from the smoothed
// multiplication operators
//   P phi = S(SF . S phi),   Q phi = S(Su . S phi),   F = d_x^{-1} u,
// and the identities they satisfy along the truncated flow.

#include <string>
#include <vector>

#include "bolab/spectral.hpp"

namespace bolab {

struct GaugeConfig {
  Truncation N = Truncation::at(8);
  int mu_max = 20;
  CutoffProfile psi{};
  /// Galerkin cap for products when N is infinite; 0 keeps every product exact.
  int n_cap = 0;

  void validate() const;
};

/// phi -> S(S a . S phi) for a fixed real function a.
class SmoothedMultiplication {
 public:
  SmoothedMultiplication(const FourierState& a, const GaugeConfig& cfg);
  Spectrum operator()(const Spectrum& phi) const;

 private:
  Spectrum weight_;
  GaugeConfig cfg_;
};

SmoothedMultiplication make_P(const FourierState& u, const GaugeConfig& cfg);
SmoothedMultiplication make_Q(const FourierState& u, const GaugeConfig& cfg);

// Complex-valued on purpose: P phi has a mean even when phi is real and mean zero.
Spectrum op_P(const Spectrum& phi, const FourierState& u, const GaugeConfig& cfg);
Spectrum op_Q(const Spectrum& phi, const FourierState& u, const GaugeConfig& cfg);

/// || d_x(P phi) - P(d_x phi) - Q phi ||_{L^2}.
double commutator_identity_check(const Spectrum& phi, const FourierState& u, const GaugeConfig& cfg);

struct SeriesResult {
  Spectrum value;
  double tail_norm = 0.0;  ///< L^2 norm of the last retained term
  bool converged = true;   ///< tail_norm <= 1e-12 ||phi||
};

/// sum_{mu <= mu_max} (1/mu!) (sign i/2)^mu P^mu phi; sign = -1 gives M, +1 its inverse.
SeriesResult op_M(const Spectrum& phi, const FourierState& u, const GaugeConfig& cfg, int sign = -1);

/// v = M u.
Spectrum gauge_v(const FourierState& u, const GaugeConfig& cfg);
/// w = P_+ (M u).
Spectrum gauge_w(const FourierState& u, const GaugeConfig& cfg);

/// || (F_t - i F_xx) - (-2i P_- u_x + (1/2)(S((Su)^2) - mean((Su)^2))) ||_{L^2},
/// with F_t = d_x^{-1} of the truncated vector field.
double G_identity_residual(const FourierState& u, const GaugeConfig& cfg);

/// The right-hand side of (d_t - i d_xx) w from the commutator decomposition.
Spectrum gauge_evolution_rhs(const FourierState& u, const GaugeConfig& cfg, double* tail_norm = nullptr);
/// Central difference of the rotating-frame coefficients e^{i n^2 t} w_n(t) over [-h, h].
Spectrum gauge_evolution_lhs(const FourierState& u, const GaugeConfig& cfg, double h);

struct GaugeResidual {
  double residual = 0.0;       ///< relative residual at dt_fd
  double residual_half = 0.0;  ///< relative residual at dt_fd / 2
  double ratio = 0.0;          ///< residual / residual_half (about 4 when differencing dominates)
  double tail_norm = 0.0;
  std::vector<std::string> warnings;
};

/// Finite N only (the flow is not exact otherwise); throws DomainError for infinite N.
GaugeResidual gauge_evolution_residual(const FourierState& u0, const GaugeConfig& cfg, double dt_fd);

}  // namespace bolab
