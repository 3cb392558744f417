#include "bolab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bolab/errors.hpp"
#include "bolab/parameters.hpp"
#include "transform.hpp"

namespace bolab {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr complex I{0.0, 1.0};

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

complex derivative_multiplier(int n, DerivativeKind kind) {
  switch (kind) {
    case DerivativeKind::first: return I * static_cast<double>(n);
    case DerivativeKind::second: return -static_cast<double>(n) * n;
    case DerivativeKind::absolute: return std::abs(static_cast<double>(n));
  }
  return 0.0;
}

int sgn(int n) { return (n > 0) - (n < 0); }

template <class F>
Spectrum map_spectrum(const Spectrum& u, F&& multiplier) {
  Spectrum out(u.n_max());
  for (int n = -u.n_max(); n <= u.n_max(); ++n) out.ref(n) = multiplier(n) * u[n];
  return out;
}

template <class F>
FourierState map_state(const FourierState& u, F&& multiplier) {
  FourierState out(u.n_max());
  auto dst = out.positive_modes();
  auto src = u.positive_modes();
  for (int n = 1; n <= u.n_max(); ++n) dst[idx(n)] = multiplier(n) * src[idx(n)];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Truncation Truncation::at(int N) {
  if (N < 1) throw DomainError("truncation N must be a positive integer");
  Truncation t;
  t.N_ = N;
  return t;
}

int Truncation::value() const {
  if (is_infinite()) throw DomainError("truncation is infinite");
  return N_;
}

std::string Truncation::to_string() const { return is_infinite() ? "inf" : std::to_string(N_); }

double CutoffProfile::operator()(double x) const noexcept {
  const double a = std::abs(x);
  if (a <= inner) return 1.0;
  if (a >= outer) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * (a - inner) / (outer - inner));
  return c * c;
}

double CutoffProfile::multiplier(int n, Truncation N) const noexcept {
  if (N.is_infinite()) return 1.0;
  return (*this)(static_cast<double>(n) / N.value());
}

int CutoffProfile::support_radius(Truncation N) const noexcept {
  if (N.is_infinite()) return -1;
  // psi(n/N) > 0 exactly when 4|n| < 3N.
  return (3 * N.value() - 1) / 4;
}

std::string CutoffProfile::describe() const {
  return "raised-cosine: psi(x)=1 for |x|<=1/2, cos^2(2*pi*(|x|-1/2)) for 1/2<|x|<3/4, 0 for |x|>=3/4";
}

// ---------------------------------------------------------------------------

Spectrum::Spectrum(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  c_.assign(idx(2 * n_max + 1), complex{});
}

Spectrum Spectrum::mode(int n, complex amplitude) {
  Spectrum s(std::abs(n));
  s.ref(n) = amplitude;
  return s;
}

int Spectrum::bandwidth() const noexcept {
  for (int n = n_max_; n > 0; --n) {
    if ((*this)[n] != complex{} || (*this)[-n] != complex{}) return n;
  }
  return 0;
}

complex& Spectrum::ref(int n) {
  if (n < -n_max_ || n > n_max_) throw std::out_of_range("Spectrum::ref: mode outside n_max");
  return c_[idx(n + n_max_)];
}

Spectrum Spectrum::resized(int n_max) const {
  Spectrum out(n_max);
  const int m = std::min(n_max, n_max_);
  for (int n = -m; n <= m; ++n) out.ref(n) = (*this)[n];
  return out;
}

bool Spectrum::is_real(double tol) const noexcept {
  for (int n = 0; n <= n_max_; ++n) {
    if (std::abs((*this)[n] - std::conj((*this)[-n])) > tol) return false;
  }
  return true;
}

double Spectrum::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, std::abs(c));
  return m;
}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  if (o.n_max_ > n_max_) *this = resized(o.n_max_);
  for (int n = -o.n_max_; n <= o.n_max_; ++n) c_[idx(n + n_max_)] += o[n];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& o) {
  if (o.n_max_ > n_max_) *this = resized(o.n_max_);
  for (int n = -o.n_max_; n <= o.n_max_; ++n) c_[idx(n + n_max_)] -= o[n];
  return *this;
}

Spectrum& Spectrum::operator*=(complex a) noexcept {
  for (auto& c : c_) c *= a;
  return *this;
}

// ---------------------------------------------------------------------------

FourierState::FourierState(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  c_.assign(idx(n_max + 1), complex{});
}

FourierState FourierState::from_spectrum(const Spectrum& s, double tol) {
  const double scale = std::max(1.0, s.max_abs());
  if (std::abs(s[0]) > tol * scale) throw DomainError("spectrum has nonzero mean");
  if (!s.is_real(tol * scale)) throw DomainError("spectrum is not conjugate symmetric");
  FourierState out(s.n_max());
  for (int n = 1; n <= s.n_max(); ++n) out.c_[idx(n)] = 0.5 * (s[n] + std::conj(s[-n]));
  return out;
}

int FourierState::bandwidth() const noexcept {
  for (int n = n_max_; n > 0; --n) {
    if (c_[idx(n)] != complex{}) return n;
  }
  return 0;
}

void FourierState::set(int n, complex value) {
  if (n == 0) throw DomainError("mode 0 of a mean-zero state is fixed at zero");
  if (std::abs(n) > n_max_) throw std::out_of_range("FourierState::set: mode outside n_max");
  c_[idx(std::abs(n))] = n > 0 ? value : std::conj(value);
}

Spectrum FourierState::to_spectrum() const {
  Spectrum s(n_max_);
  for (int n = 1; n <= n_max_; ++n) {
    s.ref(n) = c_[idx(n)];
    s.ref(-n) = std::conj(c_[idx(n)]);
  }
  return s;
}

FourierState FourierState::resized(int n_max) const {
  FourierState out(n_max);
  const int m = std::min(n_max, n_max_);
  std::copy_n(c_.begin(), m + 1, out.c_.begin());
  return out;
}

bool FourierState::is_finite() const noexcept {
  return std::all_of(c_.begin(), c_.end(),
                     [](const complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

FourierState& FourierState::operator+=(const FourierState& o) {
  if (o.n_max_ > n_max_) *this = resized(o.n_max_);
  for (int n = 1; n <= o.n_max_; ++n) c_[idx(n)] += o.c_[idx(n)];
  return *this;
}

FourierState& FourierState::operator-=(const FourierState& o) {
  if (o.n_max_ > n_max_) *this = resized(o.n_max_);
  for (int n = 1; n <= o.n_max_; ++n) c_[idx(n)] -= o.c_[idx(n)];
  return *this;
}

FourierState& FourierState::operator*=(double a) noexcept {
  for (auto& c : c_) c *= a;
  return *this;
}

// ---------------------------------------------------------------------------

Spectrum hilbert_transform(const Spectrum& u) {
  return map_spectrum(u, [](int n) { return -I * static_cast<double>(sgn(n)); });
}

FourierState hilbert_transform(const FourierState& u) {
  return map_state(u, [](int) { return -I; });
}

Spectrum derivative(const Spectrum& u, DerivativeKind kind) {
  return map_spectrum(u, [kind](int n) { return derivative_multiplier(n, kind); });
}

FourierState derivative(const FourierState& u, DerivativeKind kind) {
  return map_state(u, [kind](int n) { return derivative_multiplier(n, kind); });
}

Spectrum antiderivative(const Spectrum& u) {
  return map_spectrum(u, [](int n) { return n == 0 ? complex{} : 1.0 / (I * static_cast<double>(n)); });
}

FourierState antiderivative(const FourierState& u) {
  return map_state(u, [](int n) { return 1.0 / (I * static_cast<double>(n)); });
}

Spectrum smooth_truncation(const Spectrum& u, Truncation N, const CutoffProfile& psi) {
  if (N.is_infinite()) return u;
  const int radius = std::min(u.n_max(), psi.support_radius(N));
  Spectrum out(radius);
  for (int n = -radius; n <= radius; ++n) out.ref(n) = psi.multiplier(n, N) * u[n];
  return out;
}

FourierState smooth_truncation(const FourierState& u, Truncation N, const CutoffProfile& psi) {
  if (N.is_infinite()) return u;
  const int radius = std::min(u.n_max(), psi.support_radius(N));
  FourierState out(radius);
  auto dst = out.positive_modes();
  for (int n = 1; n <= radius; ++n) dst[idx(n)] = psi.multiplier(n, N) * u[n];
  return out;
}

// ---------------------------------------------------------------------------

Projection Projection::at_most(int N) {
  if (N < 0) throw DomainError("projection cutoff must be nonnegative");
  return Projection(Kind::at_most, N);
}

Projection Projection::above(int N) {
  if (N < 0) throw DomainError("projection cutoff must be nonnegative");
  return Projection(Kind::above, N);
}

bool Projection::keeps(int n) const noexcept {
  switch (kind_) {
    case Kind::at_most: return std::abs(n) <= N_;
    case Kind::above: return std::abs(n) > N_;
    case Kind::positive: return n > 0;
    case Kind::negative: return n < 0;
    case Kind::nonzero: return n != 0;
    case Kind::zero: return n == 0;
  }
  return false;
}

Spectrum sharp_projection(const Spectrum& u, Projection p) {
  return map_spectrum(u, [p](int n) { return p.keeps(n) ? 1.0 : 0.0; });
}

FourierState sharp_projection(const FourierState& u, Projection p) {
  if (!p.preserves_reality()) throw DomainError("P_+ and P_- do not preserve real states");
  return map_state(u, [p](int n) { return p.keeps(n) ? 1.0 : 0.0; });
}

// ---------------------------------------------------------------------------

Spectrum multiply(const Spectrum& a, const Spectrum& b) {
  return multiply(a, b, a.n_max() + b.n_max(), ProductPolicy::exact);
}

Spectrum multiply(const Spectrum& a, const Spectrum& b, int n_out, ProductPolicy policy) {
  if (n_out < 0) throw DomainError("n_out must be nonnegative");
  const int ba = a.bandwidth();
  const int bb = b.bandwidth();
  if (policy == ProductPolicy::exact && n_out < ba + bb) {
    throw ResolutionOverflow("exact product needs n_out >= " + std::to_string(ba + bb) + ", got " +
                             std::to_string(n_out));
  }
  const int band_out = std::min(n_out, ba + bb);
  const int M = detail::product_grid(ba, bb, band_out);
  thread_local std::vector<complex> ga, gb;
  ga.assign(idx(M), complex{});
  gb.assign(idx(M), complex{});
  auto wrap = [M](int n) { return idx(((n % M) + M) % M); };
  for (int n = -ba; n <= ba; ++n) ga[wrap(n)] = a[n];
  for (int n = -bb; n <= bb; ++n) gb[wrap(n)] = b[n];
  detail::to_values(ga);
  detail::to_values(gb);
  for (std::size_t j = 0; j < idx(M); ++j) ga[j] *= gb[j];
  detail::to_coefficients(ga);
  Spectrum out(n_out);
  for (int n = -band_out; n <= band_out; ++n) out.ref(n) = ga[wrap(n)];
  return out;
}

Spectrum multiply(const FourierState& a, const FourierState& b) {
  const int ba = a.bandwidth();
  const int bb = b.bandwidth();
  const int band_out = ba + bb;
  std::vector<complex> half(idx(band_out + 1));
  thread_local detail::RealProductScratch scratch;
  detail::real_product(a.positive_modes(), ba, b.positive_modes(), bb, half, band_out, scratch);
  Spectrum out(a.n_max() + b.n_max());
  out.ref(0) = half[0].real();
  for (int n = 1; n <= band_out; ++n) {
    out.ref(n) = half[idx(n)];
    out.ref(-n) = std::conj(half[idx(n)]);
  }
  return out;
}

// ---------------------------------------------------------------------------

double l2_norm(const Spectrum& u) {
  double acc = 0.0;
  for (const auto& c : u.coefficients()) acc += std::norm(c);
  return std::sqrt(two_pi * acc);
}

double l2_norm(const FourierState& u) {
  double acc = 0.0;
  for (const auto& c : u.positive_modes()) acc += std::norm(c);
  return std::sqrt(two_pi * 2.0 * acc);
}

double sobolev_norm(const FourierState& u, double sigma) {
  double acc = 0.0;
  for (int n = 1; n <= u.n_max(); ++n) {
    acc += std::pow(1.0 + static_cast<double>(n) * n, sigma) * std::norm(u[n]);
  }
  return std::sqrt(two_pi * 2.0 * acc);
}

double z1_norm(const Spectrum& u, const ParameterSet& params) {
  const double p = params.p;
  const double rp = params.r * p;
  double best = 0.0;
  // d = 0: {-1, 0, 1}; d >= 1: 2^d <= |n| < 2^{d+1}.
  double block0 = 0.0;
  for (int n = -1; n <= 1; ++n) block0 += std::pow(std::abs(u[n]), p);
  best = std::pow(block0, 1.0 / p);
  for (int d = 1; (1 << d) <= u.n_max(); ++d) {
    double acc = 0.0;
    for (int m = 1 << d; m < (1 << (d + 1)) && m <= u.n_max(); ++m) {
      acc += std::pow(std::abs(u[m]), p) + std::pow(std::abs(u[-m]), p);
    }
    best = std::max(best, std::pow(std::exp2(rp * d) * acc, 1.0 / p));
  }
  return best;
}

double z1_norm(const FourierState& u, const ParameterSet& params) {
  const double p = params.p;
  const double rp = params.r * p;
  const auto c = u.positive_modes();
  double best = u.n_max() >= 1 ? std::pow(2.0 * std::pow(std::abs(c[1]), p), 1.0 / p) : 0.0;
  for (int d = 1; (1 << d) <= u.n_max(); ++d) {
    double acc = 0.0;
    for (int m = 1 << d; m < (1 << (d + 1)) && m <= u.n_max(); ++m) acc += 2.0 * std::pow(std::abs(c[idx(m)]), p);
    best = std::max(best, std::pow(std::exp2(rp * d) * acc, 1.0 / p));
  }
  return best;
}

double integrate_product(const FourierState& u, const FourierState& v) {
  double acc = 0.0;
  const int m = std::min(u.n_max(), v.n_max());
  for (int n = 1; n <= m; ++n) acc += (u[n] * std::conj(v[n])).real();
  return two_pi * 2.0 * acc;
}

double integrate_cube(const FourierState& u) {
  const int band = u.bandwidth();
  if (band == 0) return 0.0;
  const int M = detail::fft_size_at_least(3 * band + 1);
  thread_local std::vector<complex> half;
  thread_local std::vector<double> values;
  half.assign(idx(M / 2 + 1), complex{});
  values.assign(idx(M), 0.0);
  std::copy_n(u.positive_modes().begin(), band + 1, half.begin());
  detail::half_to_values(half, values);
  double acc = 0.0;
  for (double v : values) acc += v * v * v;
  return two_pi * acc / M;
}

}  // namespace bolab
