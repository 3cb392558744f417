#include "bolab/theta_polynomial.hpp"

#include <cmath>

#include "bolab/errors.hpp"

namespace bolab {

std::string to_string(ResonantFamily f) {
  switch (f) {
    case ResonantFamily::C1: return "C1";
    case ResonantFamily::C2: return "C2";
    case ResonantFamily::C3: return "C3";
    case ResonantFamily::C4: return "C4";
    case ResonantFamily::C5: return "C5";
    case ResonantFamily::D2: return "D2";
    case ResonantFamily::D3: return "D3";
  }
  return "?";
}

ResonantFamily parse_family(const std::string& name) {
  for (auto f : {ResonantFamily::C1, ResonantFamily::C2, ResonantFamily::C3, ResonantFamily::C4, ResonantFamily::C5,
                 ResonantFamily::D2, ResonantFamily::D3}) {
    if (to_string(f) == name) return f;
  }
  throw DomainError("unknown resonant family '" + name + "'");
}

double theta_psi(int k, Truncation N, const CutoffProfile& psi) { return psi.multiplier(k, N); }

void ThetaPolynomial::add(int power, const mpq_class& c) {
  if (power < 0) throw DomainError("negative power");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(power, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

mpq_class ThetaPolynomial::coefficient(int power) const {
  auto it = terms_.find(power);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

int ThetaPolynomial::lowest_power() const {
  if (terms_.empty()) throw DomainError("zero polynomial has no terms");
  return terms_.begin()->first;
}

int ThetaPolynomial::highest_power() const {
  if (terms_.empty()) throw DomainError("zero polynomial has no terms");
  return terms_.rbegin()->first;
}

double ThetaPolynomial::evaluate(double theta) const {
  double s = 0.0;
  for (const auto& [p, c] : terms_) s += c.get_d() * std::pow(theta, p);
  return s;
}

std::string ThetaPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [p, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.get_str() + "*theta^" + std::to_string(p);
  }
  return out;
}

ThetaPolynomial& ThetaPolynomial::operator+=(const ThetaPolynomial& o) {
  for (const auto& [p, c] : o.terms_) add(p, c);
  return *this;
}

ThetaPolynomial ThetaPolynomial::operator-() const {
  ThetaPolynomial r;
  for (const auto& [p, c] : terms_) r.add(p, -c);
  return r;
}

namespace {

mpq_class q(long num, long den = 1) {
  mpq_class r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

}  // namespace

ThetaPolynomial resonant_coefficient(ResonantFamily f, int mu) {
  if (mu < 0) throw DomainError("mu must be nonnegative");
  ThetaPolynomial p;
  const long m = mu;
  switch (f) {
    case ResonantFamily::C1:
      for (int j = 1; j <= mu + 2; ++j) p.add(2 * j, q(-(m + 1), 2));
      break;
    case ResonantFamily::C2:
      p.add(2, q(-(m + 1)));
      for (int j = 2; j <= mu + 2; ++j) p.add(2 * j, q(1));
      break;
    case ResonantFamily::C3:
      // (1/2)[(mu+1) theta^2 - (mu+1) theta^4 + (1-mu) theta^6 + ... + (mu-1) theta^{2mu+4}]
      p.add(2, q(m + 1, 2));
      p.add(4, q(-(m + 1), 2));
      for (int j = 2; j <= mu + 1; ++j) p.add(2 * j + 2, q(2 * j - m - 3, 2));
      break;
    case ResonantFamily::C4:
      p.add(2, q((m + 1) * (m + 2), 2));
      break;
    case ResonantFamily::C5:
      p.add(2, q(-m * (m + 1), 2));
      for (int k = 1; k <= mu; ++k) p.add(2 * k + 2, q(m + 1 - k));
      break;
    case ResonantFamily::D2:
      for (long j = 1; j <= m + 1; ++j) p.add(static_cast<int>(2 * j + 1), q(j * (j + 1)));
      break;
    case ResonantFamily::D3:
      for (long j = 1; j <= m + 1; ++j) p.add(static_cast<int>(2 * j + 1), q(-j * (j + 1)));
      break;
  }
  return p;
}

ThetaPolynomial resonant_coefficient_by_summation(ResonantFamily f, int mu) {
  if (mu < 0) throw DomainError("mu must be nonnegative");
  ThetaPolynomial p;
  const int m = mu;
  switch (f) {
    case ResonantFamily::C1:
      for (int i = 1; i <= m + 2; ++i) p.add(2 * (m + 3 - i), q(-(m + 1), 2));
      break;
    case ResonantFamily::C2:
      for (int m2 = 0; m2 <= m; ++m2) {
        p.add(2 * m2 + 4, q(m - m2 + 1));
        p.add(2 * m2 + 2, q(-(m - m2 + 1)));
      }
      break;
    case ResonantFamily::C3: {
      ThetaPolynomial B;
      for (int m2 = 0; m2 <= m + 1; ++m2) {
        for (int i = 1; i <= m + 1 - m2; ++i) {
          B.add(2 * m - 2 * i + 6, q(1));
          B.add(2 * m - 2 * i - 2 * m2 + 6, q(-1));
        }
        for (int i = m + 2 - m2; i <= m + 1; ++i) {
          B.add(2 * m - 2 * i + 4, q(1));
          B.add(2 * i + 2 * m2 - 2 * m, q(-1));
        }
      }
      for (const auto& [pw, c] : B.terms()) p.add(pw, c / 2);
      break;
    }
    case ResonantFamily::C4: {
      // (mu+2)! / (2 (mu+1)!) times the mu+1 terms of the inner sum.
      mpz_class num = 1, den = 1;
      for (int k = 2; k <= m + 2; ++k) num *= k;
      for (int k = 2; k <= m + 1; ++k) den *= k;
      mpq_class c(num * (m + 1), 2 * den);
      c.canonicalize();
      p.add(2, c);
      break;
    }
    case ResonantFamily::C5:
      for (int m1 = 0; m1 <= m; ++m1) {
        for (int m2 = 0; m1 + m2 <= m; ++m2) {
          const int m3 = m - m1 - m2;
          p.add(2 * m2 + 4, q(1));
          p.add(2 * m3 + 4, q(-1));
          p.add(2, q(-1));
          p.add(2 * m3 + 2, q(1));
        }
      }
      break;
    case ResonantFamily::D2:
      for (long m2 = 0; m2 <= m; ++m2) {
        const long w = m - m2 + 1;
        p.add(static_cast<int>(2 * m2 + 3), q(2 * w * (m2 + 1) * (m2 + 2), 2));
        p.add(static_cast<int>(2 * m2 + 1), q(-2 * w * m2 * (m2 + 1), 2));
      }
      break;
    case ResonantFamily::D3:
      // The inner sum runs to mu + 1; stopping at mu would lose the top term.
      for (long m2 = 0; m2 <= m + 1; ++m2) p.add(static_cast<int>(2 * m2 + 1), q(-m2 * (m2 + 1)));
      break;
  }
  return p;
}

ExperimentReport verify_cancellation(int mu_max) {
  if (mu_max < 0) throw DomainError("mu_max must be nonnegative");
  ExperimentReport rep;
  rep.experiment = "cancellation";
  const ResonantFamily all[] = {ResonantFamily::C1, ResonantFamily::C2, ResonantFamily::C3, ResonantFamily::C4,
                                ResonantFamily::C5, ResonantFamily::D2, ResonantFamily::D3};
  auto& rows = rep.statistics["per_mu"] = nlohmann::ordered_json::array();
  int first_c = -1, first_d = -1, first_route = -1;
  for (int mu = 0; mu <= mu_max; ++mu) {
    ThetaPolynomial c, d;
    bool routes_agree = true;
    for (auto f : all) {
      const ThetaPolynomial closed = resonant_coefficient(f, mu);
      routes_agree = routes_agree && closed == resonant_coefficient_by_summation(f, mu);
      if (f == ResonantFamily::D2 || f == ResonantFamily::D3) {
        d += closed;
      } else {
        c += closed;
      }
    }
    if (!c.is_zero() && first_c < 0) first_c = mu;
    if (!d.is_zero() && first_d < 0) first_d = mu;
    if (!routes_agree && first_route < 0) first_route = mu;
    nlohmann::ordered_json row;
    row["mu"] = mu;
    row["C_sum"] = c.to_string();
    row["D_sum"] = d.to_string();
    row["closed_form_matches_summation"] = routes_agree;
    rows.push_back(std::move(row));
  }
  rep.statistics["mu_max"] = mu_max;
  const ThetaPolynomial control = resonant_coefficient(ResonantFamily::C1, 0) + resonant_coefficient(ResonantFamily::C2, 0);
  rep.statistics["negative_control_C1_plus_C2_at_0"] = control.to_string();

  rep.add_check("C_sum_vanishes", first_c < 0, first_c, -1, "first mu with a nonzero C1+...+C5 (-1: none)");
  rep.add_check("D_sum_vanishes", first_d < 0, first_d, -1, "first mu with a nonzero D2+D3 (-1: none)");
  rep.add_check("closed_forms_match_summation", first_route < 0, first_route, -1,
                "first mu where the two constructions differ (-1: none)");
  rep.add_check("negative_control_nonzero", !control.is_zero(), control.is_zero() ? 0.0 : 1.0, 1.0);
  return rep;
}

}  // namespace bolab
