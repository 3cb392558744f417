#pragma once

// Polynomials in theta = psi(k/N) with exact rational coefficients, and the
// resonant coefficient families C1..C5, D2, D3 whose sums must vanish.

#include <map>
#include <string>

#include <gmpxx.h>

#include "bolab/report.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

enum class ResonantFamily { C1, C2, C3, C4, C5, D2, D3 };

std::string to_string(ResonantFamily f);
/// "C1".."C5", "D2", "D3"; throws DomainError otherwise.
ResonantFamily parse_family(const std::string& name);

/// theta = psi(k/N), the variable of the polynomials below.
double theta_psi(int k, Truncation N, const CutoffProfile& psi = {});

class ThetaPolynomial {
 public:
  ThetaPolynomial() = default;

  void add(int power, const mpq_class& c);
  mpq_class coefficient(int power) const;
  /// Nonzero terms only, ascending powers.
  const std::map<int, mpq_class>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  int lowest_power() const;
  int highest_power() const;
  double evaluate(double theta) const;

  /// Ascending "c*theta^p" terms joined by " + "; "0" for the zero polynomial.
  std::string to_string() const;

  ThetaPolynomial& operator+=(const ThetaPolynomial& o);
  friend ThetaPolynomial operator+(ThetaPolynomial a, const ThetaPolynomial& b) { return a += b; }
  ThetaPolynomial operator-() const;
  friend bool operator==(const ThetaPolynomial& a, const ThetaPolynomial& b) { return a.terms_ == b.terms_; }

 private:
  std::map<int, mpq_class> terms_;
};

/// Closed forms, e.g. C1 = -(mu+1)/2 (theta^2 + ... + theta^{2mu+4}).
ThetaPolynomial resonant_coefficient(ResonantFamily f, int mu);
/// The same polynomials assembled from the nested sums they are derived from.
ThetaPolynomial resonant_coefficient_by_summation(ResonantFamily f, int mu);

/// C1+...+C5 = 0 and D2+D3 = 0 for every mu <= mu_max, plus agreement of the
/// two constructions and a negative control (C1 + C2 != 0).
ExperimentReport verify_cancellation(int mu_max);

}  // namespace bolab
