#pragma once

// Fourier-side representation of functions on the torus T = R / 2piZ.
//
// Convention: u(x) = sum_n u_n e^{inx}, so that
//   int_T |u|^2 dx = 2 pi sum_n |u_n|^2
// (every norm, energy and pairing in the library uses this).

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace bolab {

using complex = std::complex<double>;

struct ParameterSet;

/// Truncation level N of the smooth multiplier S_N; infinite means S_N = 1.
class Truncation {
 public:
  /// S_inf = identity.
  static constexpr Truncation infinite() noexcept { return Truncation(); }
  static Truncation at(int N);

  bool is_infinite() const noexcept { return N_ == 0; }
  /// Throws DomainError when infinite.
  int value() const;
  std::string to_string() const;

  friend bool operator==(const Truncation&, const Truncation&) = default;

 private:
  constexpr Truncation() noexcept = default;
  int N_ = 0;
};

/// The smooth cutoff psi: even, 1 on [-1/2, 1/2], 0 outside (-3/4, 3/4).
/// Realized as cos^2(2 pi (|x| - 1/2)) across the transition band.
struct CutoffProfile {
  static constexpr double inner = 0.5;
  static constexpr double outer = 0.75;

  double operator()(double x) const noexcept;
  /// psi(n / N); 1 when N is infinite.
  double multiplier(int n, Truncation N) const noexcept;
  /// Largest |n| with psi(n/N) != 0, or -1 when N is infinite (no bound).
  int support_radius(Truncation N) const noexcept;
  std::string describe() const;
};

/// General complex trigonometric polynomial sum_{|n| <= n_max} c_n e^{inx}.
/// Used where the operators leave the real mean-zero class (P_+, e^{-iP/2}, ...).
class Spectrum {
 public:
  Spectrum() : Spectrum(0) {}
  explicit Spectrum(int n_max);

  static Spectrum mode(int n, complex amplitude = 1.0);

  int n_max() const noexcept { return n_max_; }
  /// Largest |n| carrying a nonzero coefficient (0 for the zero function).
  int bandwidth() const noexcept;

  /// Coefficient at n; zero for |n| > n_max.
  complex operator[](int n) const noexcept {
    return (n < -n_max_ || n > n_max_) ? complex{} : c_[static_cast<std::size_t>(n + n_max_)];
  }
  /// Mutable coefficient; throws std::out_of_range for |n| > n_max.
  complex& ref(int n);

  /// Storage ordered from -n_max to n_max.
  std::span<const complex> coefficients() const noexcept { return c_; }
  std::span<complex> coefficients() noexcept { return c_; }

  /// Zero-padded or sharply truncated copy.
  Spectrum resized(int n_max) const;

  bool is_real(double tol = 0.0) const noexcept;
  double max_abs() const noexcept;

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator-=(const Spectrum& o);
  Spectrum& operator*=(complex a) noexcept;

  friend Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
  friend Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
  friend Spectrum operator*(complex a, Spectrum s) { return s *= a; }
  friend Spectrum operator*(Spectrum s, complex a) { return s *= a; }

 private:
  int n_max_;
  std::vector<complex> c_;
};

/// A real-valued, mean-zero function on the torus. Only the modes n = 1..n_max
/// are stored; u_{-n} = conj(u_n) and u_0 = 0 hold by construction.
class FourierState {
 public:
  FourierState() : FourierState(0) {}
  explicit FourierState(int n_max);

  /// Throws DomainError unless `s` is conjugate symmetric with zero mean to within `tol`
  /// (relative to its largest coefficient).
  static FourierState from_spectrum(const Spectrum& s, double tol = 1e-12);

  int n_max() const noexcept { return n_max_; }
  int bandwidth() const noexcept;

  complex operator[](int n) const noexcept {
    if (n < 0) return std::conj((*this)[-n]);
    return n > n_max_ ? complex{} : c_[static_cast<std::size_t>(n)];
  }
  /// Sets u_n (and implicitly u_{-n}); n = 0 is rejected.
  void set(int n, complex value);

  /// Modes 0..n_max; entry 0 is always zero.
  std::span<const complex> positive_modes() const noexcept { return c_; }
  /// Mutable view for numerical kernels. Callers must leave entry 0 at zero.
  std::span<complex> positive_modes() noexcept { return c_; }

  Spectrum to_spectrum() const;
  FourierState resized(int n_max) const;
  bool is_finite() const noexcept;

  FourierState& operator+=(const FourierState& o);
  FourierState& operator-=(const FourierState& o);
  FourierState& operator*=(double a) noexcept;

  friend FourierState operator+(FourierState a, const FourierState& b) { return a += b; }
  friend FourierState operator-(FourierState a, const FourierState& b) { return a -= b; }
  friend FourierState operator*(double a, FourierState s) { return s *= a; }
  friend FourierState operator*(FourierState s, double a) { return s *= a; }

 private:
  int n_max_;
  std::vector<complex> c_;
};

// ---------------------------------------------------------------------------
// Fourier multipliers

/// H u with multiplier -i sgn(n), sgn(0) = 0.
Spectrum hilbert_transform(const Spectrum& u);
FourierState hilbert_transform(const FourierState& u);

enum class DerivativeKind {
  first,     ///< multiplier  i n
  second,    ///< multiplier -n^2
  absolute,  ///< multiplier |n|, i.e. |d_x| (energy density |d_x^{1/2} u|^2)
};

Spectrum derivative(const Spectrum& u, DerivativeKind kind = DerivativeKind::first);
FourierState derivative(const FourierState& u, DerivativeKind kind = DerivativeKind::first);

/// Mean-zero antiderivative: F_n = u_n / (in), F_0 = 0. Any mean of `u` is discarded.
Spectrum antiderivative(const Spectrum& u);
FourierState antiderivative(const FourierState& u);

/// S_N u with multiplier psi(n/N). For finite N the result's n_max shrinks to the support of psi(./N).
Spectrum smooth_truncation(const Spectrum& u, Truncation N, const CutoffProfile& psi = {});
FourierState smooth_truncation(const FourierState& u, Truncation N, const CutoffProfile& psi = {});

/// Sharp frequency selector: P_{<=N}, P_{>N}, P_+, P_-, P_{!=0}, P_0.
class Projection {
 public:
  enum class Kind { at_most, above, positive, negative, nonzero, zero };

  static Projection at_most(int N);
  static Projection above(int N);
  static Projection positive() noexcept { return Projection(Kind::positive, 0); }
  static Projection negative() noexcept { return Projection(Kind::negative, 0); }
  static Projection nonzero() noexcept { return Projection(Kind::nonzero, 0); }
  static Projection zero() noexcept { return Projection(Kind::zero, 0); }

  Kind kind() const noexcept { return kind_; }
  bool keeps(int n) const noexcept;
  /// False for P_+ and P_-, which do not map real functions to real functions.
  bool preserves_reality() const noexcept { return kind_ != Kind::positive && kind_ != Kind::negative; }

 private:
  Projection(Kind k, int N) noexcept : kind_(k), N_(N) {}
  Kind kind_;
  int N_;
};

Spectrum sharp_projection(const Spectrum& u, Projection p);
/// Throws DomainError for P_+ / P_-; use the Spectrum overload for those.
FourierState sharp_projection(const FourierState& u, Projection p);

// ---------------------------------------------------------------------------
// Products

enum class ProductPolicy {
  exact,     ///< throw ResolutionOverflow unless n_out covers the full product
  truncate,  ///< keep |n| <= n_out (Galerkin truncation)
};

/// Pointwise product; exact, with n_max = a.n_max() + b.n_max().
Spectrum multiply(const Spectrum& a, const Spectrum& b);
Spectrum multiply(const Spectrum& a, const Spectrum& b, int n_out, ProductPolicy policy);
/// Product of two real states. The result keeps its mean (mode 0).
Spectrum multiply(const FourierState& a, const FourierState& b);

// ---------------------------------------------------------------------------
// Norms and integrals

double l2_norm(const Spectrum& u);
double l2_norm(const FourierState& u);

/// (2 pi sum <n>^{2 sigma} |u_n|^2)^{1/2}.
double sobolev_norm(const FourierState& u, double sigma);

/// sup_d ( sum_{n ~ 2^d} 2^{r p d} |u_n|^p )^{1/p}; the d = 0 block is {-1, 0, 1}.
double z1_norm(const Spectrum& u, const ParameterSet& params);
double z1_norm(const FourierState& u, const ParameterSet& params);

/// int_T u v dx for real u, v.
double integrate_product(const FourierState& u, const FourierState& v);
/// int_T u^3 dx, computed exactly on an alias-free grid.
double integrate_cube(const FourierState& u);

}  // namespace bolab
