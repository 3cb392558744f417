#include "bolab/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "bolab/dynamics.hpp"
#include "bolab/errors.hpp"

namespace bolab {
namespace {

constexpr complex I{0.0, 1.0};

Spectrum plus_part(const Spectrum& s) { return sharp_projection(s, Projection::positive()); }
Spectrum minus_part(const Spectrum& s) { return sharp_projection(s, Projection::negative()); }
Spectrum dx(const Spectrum& s) { return derivative(s, DerivativeKind::first); }
Spectrum dxx(const Spectrum& s) { return derivative(s, DerivativeKind::second); }

// Resolution at which the truncated vector field of u is computed without Galerkin loss.
int exact_field_resolution(const FourierState& u, const GaugeConfig& cfg) {
  int n = std::max(u.n_max(), 1);
  if (cfg.N.is_infinite()) return std::max(n, 2 * u.bandwidth());
  return std::max({n, cfg.N.value(), cfg.psi.support_radius(cfg.N)});
}

}  // namespace

void GaugeConfig::validate() const {
  if (mu_max < 0) throw DomainError("mu_max must be nonnegative");
  if (n_cap < 0) throw DomainError("n_cap must be nonnegative");
}

SmoothedMultiplication::SmoothedMultiplication(const FourierState& a, const GaugeConfig& cfg)
    : weight_(smooth_truncation(a.to_spectrum(), cfg.N, cfg.psi)), cfg_(cfg) {
  cfg_.validate();
}

Spectrum SmoothedMultiplication::operator()(const Spectrum& phi) const {
  Spectrum prod = multiply(weight_, smooth_truncation(phi, cfg_.N, cfg_.psi));
  if (cfg_.N.is_infinite()) return cfg_.n_cap > 0 ? prod.resized(cfg_.n_cap) : prod;
  return smooth_truncation(prod, cfg_.N, cfg_.psi);
}

SmoothedMultiplication make_P(const FourierState& u, const GaugeConfig& cfg) {
  return SmoothedMultiplication(antiderivative(u), cfg);
}

SmoothedMultiplication make_Q(const FourierState& u, const GaugeConfig& cfg) { return SmoothedMultiplication(u, cfg); }

Spectrum op_P(const Spectrum& phi, const FourierState& u, const GaugeConfig& cfg) { return make_P(u, cfg)(phi); }

Spectrum op_Q(const Spectrum& phi, const FourierState& u, const GaugeConfig& cfg) { return make_Q(u, cfg)(phi); }

double commutator_identity_check(const Spectrum& phi, const FourierState& u, const GaugeConfig& cfg) {
  const auto P = make_P(u, cfg);
  const auto Q = make_Q(u, cfg);
  return l2_norm(dx(P(phi)) - P(dx(phi)) - Q(phi));
}

namespace {

SeriesResult series(const SmoothedMultiplication& P, const Spectrum& phi, int mu_max, int sign) {
  SeriesResult r;
  r.value = phi;
  Spectrum term = phi;
  const complex step = complex(0.0, 0.5 * sign);
  for (int k = 1; k <= mu_max; ++k) {
    term = P(term) * (step / static_cast<double>(k));
    r.value += term;
  }
  r.tail_norm = mu_max == 0 ? l2_norm(phi) : l2_norm(term);
  const double scale = l2_norm(phi);
  r.converged = mu_max == 0 || r.tail_norm <= 1e-12 * scale;
  return r;
}

}  // namespace

SeriesResult op_M(const Spectrum& phi, const FourierState& u, const GaugeConfig& cfg, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
  return series(make_P(u, cfg), phi, cfg.mu_max, sign);
}

Spectrum gauge_v(const FourierState& u, const GaugeConfig& cfg) { return op_M(u.to_spectrum(), u, cfg).value; }

Spectrum gauge_w(const FourierState& u, const GaugeConfig& cfg) { return plus_part(gauge_v(u, cfg)); }

double G_identity_residual(const FourierState& u_in, const GaugeConfig& cfg) {
  const FourierState u = u_in.resized(exact_field_resolution(u_in, cfg));
  const Spectrum F = antiderivative(u).to_spectrum();
  const Spectrum Ft = antiderivative(vector_field(u, cfg.N, cfg.psi)).to_spectrum();
  const Spectrum lhs = Ft - I * dxx(F);

  const Spectrum U = u.to_spectrum();
  const Spectrum Su = smooth_truncation(U, cfg.N, cfg.psi);
  const Spectrum sq = multiply(Su, Su);
  const Spectrum rhs = (-2.0 * I) * minus_part(dx(U)) +
                       0.5 * (smooth_truncation(sq, cfg.N, cfg.psi) - sharp_projection(sq, Projection::zero()));
  return l2_norm(lhs - rhs);
}

Spectrum gauge_evolution_rhs(const FourierState& u_in, const GaugeConfig& cfg, double* tail_norm) {
  cfg.validate();
  const FourierState u = u_in.resized(exact_field_resolution(u_in, cfg));
  const auto P = make_P(u, cfg);
  const auto Q = make_Q(u, cfg);
  const auto T = SmoothedMultiplication(antiderivative(vector_field(u, cfg.N, cfg.psi)), cfg);

  double tail = 0.0;
  auto M = [&](const Spectrum& phi) {
    SeriesResult r = series(P, phi, cfg.mu_max, -1);
    tail = std::max(tail, r.tail_norm);
    return r.value;
  };
  auto dxM = [&](const Spectrum& phi) { return dx(M(phi)) - M(dx(phi)); };

  const Spectrum U = u.to_spectrum();
  const Spectrum Ux = dx(U);
  const Spectrum Uxx = dxx(U);
  const Spectrum Pm_ux = minus_part(Ux);

  Spectrum rhs = (-2.0 * I) * plus_part(dx(M(Pm_ux)));
  rhs += (-2.0 * I) * plus_part(dxM(Ux) + (0.5 * I) * M(Q(Ux)));
  rhs += (2.0 * I) * plus_part(dxM(Pm_ux));

  // [d_t, P^k] u = P [d_t, P^{k-1}] u + T P^{k-1} u, with T = [d_t, P].
  Spectrum dtM(0), A(0), Pk = U;
  complex c = 1.0;
  for (int k = 1; k <= cfg.mu_max; ++k) {
    c *= complex(0.0, -0.5) / static_cast<double>(k);
    A = P(A) + T(Pk);
    Pk = P(Pk);
    dtM += c * A;
  }
  const Spectrum dxdxM = dxx(M(U)) - 2.0 * dx(M(Ux)) + M(Uxx);
  rhs += plus_part(dtM - I * dxdxM);

  if (tail_norm != nullptr) *tail_norm = tail;
  return rhs;
}

Spectrum gauge_evolution_lhs(const FourierState& u_in, const GaugeConfig& cfg, double h) {
  if (cfg.N.is_infinite()) throw DomainError("the evolution residual needs a finite truncation");
  if (!(h > 0.0)) throw DomainError("dt_fd must be positive");
  IntegratorConfig icfg;
  icfg.N = cfg.N;
  icfg.psi = cfg.psi;
  icfg.n_max = exact_field_resolution(u_in, cfg);
  icfg.dt = h / 4.0;
  const FourierState u = u_in.resized(icfg.n_max);
  const Spectrum wp = gauge_w(flow_map(u, h, icfg), cfg);
  const Spectrum wm = gauge_w(flow_map(u, -h, icfg), cfg);

  const int band = std::max(wp.n_max(), wm.n_max());
  Spectrum lhs(band);
  for (int n = 1; n <= band; ++n) {
    const double ph = static_cast<double>(n) * n * h;
    lhs.ref(n) = (std::polar(1.0, ph) * wp[n] - std::polar(1.0, -ph) * wm[n]) / (2.0 * h);
  }
  return lhs;
}

GaugeResidual gauge_evolution_residual(const FourierState& u0, const GaugeConfig& cfg, double dt_fd) {
  GaugeResidual r;
  const Spectrum rhs = gauge_evolution_rhs(u0, cfg, &r.tail_norm);
  const double scale = l2_norm(rhs);
  auto relative = [&](double h) {
    const double d = l2_norm(gauge_evolution_lhs(u0, cfg, h) - rhs);
    return scale > 0.0 ? d / scale : d;
  };
  r.residual = relative(dt_fd);
  r.residual_half = relative(dt_fd / 2.0);
  r.ratio = r.residual_half > 0.0 ? r.residual / r.residual_half : 0.0;
  if (r.residual > 0.0 && !(r.residual_half < r.residual)) {
    r.warnings.push_back("residual did not decrease when dt_fd was halved");
  }
  if (r.tail_norm > 1e-12 * l2_norm(u0.to_spectrum())) {
    r.warnings.push_back("series tail above 1e-12 of the data norm at mu_max = " + std::to_string(cfg.mu_max));
  }
  return r;
}

}  // namespace bolab
