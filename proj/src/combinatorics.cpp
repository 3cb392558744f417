#include "bolab/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bolab/errors.hpp"
#include "bolab/random.hpp"

namespace bolab {

nlohmann::ordered_json CountReport::to_json() const {
  nlohmann::ordered_json j;
  j["query"] = query;
  j["count"] = count.get_str();
  if (bound) {
    j["bound"] = bound->get_str();
    j["bound_value"] = bound->get_d();
  }
  if (oracle) j["oracle"] = oracle->get_str();
  j["satisfied"] = satisfied;
  return j;
}

namespace {

long isqrt(long n) {
  if (n < 0) return -1;
  auto r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

long norm(long a, long b) { return a * a + a * b + b * b; }

}  // namespace

long eisenstein_radius(long K) {
  if (K < 0) throw DomainError("K must be nonnegative");
  // max |m1| subject to the norm: 3 m1^2 <= 4K.
  return isqrt(4 * K / 3);
}

std::vector<std::pair<long, long>> eisenstein_solutions(long K) {
  std::vector<std::pair<long, long>> out;
  const long R = eisenstein_radius(K);
  for (long m1 = -R; m1 <= R; ++m1) {
    // m2^2 + m1 m2 + (m1^2 - K) = 0, discriminant 4K - 3 m1^2.
    const long disc = 4 * K - 3 * m1 * m1;
    const long s = isqrt(disc);
    if (s < 0 || s * s != disc) continue;
    for (long m2 : {(-m1 - s), (-m1 + s)}) {
      if (m2 % 2 != 0) continue;
      out.emplace_back(m1, m2 / 2);
      if (s == 0) break;
    }
  }
  return out;
}

long eisenstein_count(long K, long box) {
  if (box < 1) throw DomainError("box must be positive");
  if (box < eisenstein_radius(K)) {
    throw DomainError("box " + std::to_string(box) + " cannot contain every solution of norm " + std::to_string(K) +
                      " (needs >= " + std::to_string(eisenstein_radius(K)) + ")");
  }
  long c = 0;
  for (auto [a, b] : eisenstein_solutions(K)) c += (std::abs(a) <= box && std::abs(b) <= box);
  return c;
}

// ---------------------------------------------------------------------------

long quadruple_box(int d) {
  if (d < 1 || d > 24) throw DomainError("d must lie in [1, 24]");
  return (1L << (d + 1)) - 1;
}

bool quadruple_entry_admissible(long n, int d) {
  if (std::abs(n) > quadruple_box(d)) return false;
  return 1.0 + static_cast<double>(n) * static_cast<double>(n) >= std::exp2(1.8 * d);
}

namespace {

struct Problem {
  long K1, K2;
  int d;
};

bool valid(const Problem& p, const std::array<long, 4>& n) {
  long s = 0, q = 0;
  for (long v : n) {
    if (!quadruple_entry_admissible(v, p.d)) return false;
    s += v;
    q += std::abs(v) * v;
  }
  if (s != p.K1 || q != p.K2) return false;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (n[i] + n[j] == 0) return false;
    }
  }
  return true;
}

std::vector<long> admissible_values(int d) {
  std::vector<long> v;
  const long B = quadruple_box(d);
  for (long n = -B; n <= B; ++n) {
    if (quadruple_entry_admissible(n, d)) v.push_back(n);
  }
  return v;
}

std::array<int, 3> others(int pinned) {
  std::array<int, 3> o{};
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    if (i != pinned) o[k++] = i;
  }
  return o;
}

mpz_class enumerate_pinned(const Problem& p, int idx, long v) {
  mpz_class count = 0;
  if (!quadruple_entry_admissible(v, p.d)) return count;
  const auto o = others(idx);
  const auto vals = admissible_values(p.d);
  std::array<long, 4> n{};
  n[idx] = v;
  for (long a : vals) {
    for (long b : vals) {
      n[o[0]] = a;
      n[o[1]] = b;
      n[o[2]] = p.K1 - v - a - b;
      if (valid(p, n)) ++count;
    }
  }
  return count;
}

std::vector<long> divisors(long R) {
  std::vector<long> out;
  const long a = std::abs(R);
  for (long x = 1; x * x <= a; ++x) {
    if (a % x != 0) continue;
    out.push_back(x);
    out.push_back(-x);
    if (x != a / x) {
      out.push_back(a / x);
      out.push_back(-(a / x));
    }
  }
  return out;
}

bool sign_matches(long n, int s) { return s > 0 ? n >= 0 : n < 0; }

// Pinned entry n[idx] = v; the other three (a, b, e) satisfy a+b+e = c and
// sum s_l n_l^2 = Q for their sign pattern s. Mixed patterns factor as
// (n_p - c)(n_q - c) = (c^2 - s Q)/2 with p, q the equal-sign pair; the
// all-equal pattern becomes an Eisenstein norm in m_l = 3 n_l - c.
mpz_class divisors_pinned(const Problem& p, int idx, long v) {
  mpz_class count = 0;
  if (!quadruple_entry_admissible(v, p.d)) return count;
  const auto o = others(idx);
  const long c = p.K1 - v;
  const long Q = p.K2 - std::abs(v) * v;
  std::array<long, 4> n{};
  n[idx] = v;

  for (int mask = 0; mask < 8; ++mask) {
    const std::array<int, 3> s{(mask & 1) ? -1 : 1, (mask & 2) ? -1 : 1, (mask & 4) ? -1 : 1};
    auto accept = [&](long x0, long x1, long x2) {
      if (!sign_matches(x0, s[0]) || !sign_matches(x1, s[1]) || !sign_matches(x2, s[2])) return;
      n[o[0]] = x0;
      n[o[1]] = x1;
      n[o[2]] = x2;
      if (valid(p, n)) ++count;
    };
    if (s[0] == s[1] && s[1] == s[2]) {
      const long twice = 9 * s[0] * Q - 3 * c * c;
      if (twice < 0 || twice % 2 != 0) continue;
      for (auto [m1, m2] : eisenstein_solutions(twice / 2)) {
        const long m3 = -m1 - m2;
        if ((m1 + c) % 3 != 0 || (m2 + c) % 3 != 0 || (m3 + c) % 3 != 0) continue;
        accept((m1 + c) / 3, (m2 + c) / 3, (m3 + c) / 3);
      }
      continue;
    }
    // Position of the odd sign, and the sign of the pair.
    const int odd = (s[0] == s[1]) ? 2 : (s[0] == s[2] ? 1 : 0);
    const int sp = s[(odd + 1) % 3];
    const long twice = c * c - sp * Q;
    if (twice % 2 != 0) continue;
    const long R = twice / 2;
    if (R == 0) continue;  // forces n_odd + n_other = 0
    for (long x : divisors(R)) {
      const long y = R / x;
      std::array<long, 3> t{};
      const int pp = (odd + 1) % 3, qq = (odd + 2) % 3;
      t[pp] = c + x;
      t[qq] = c + y;
      t[odd] = -c - x - y;
      accept(t[0], t[1], t[2]);
    }
  }
  return count;
}

Problem problem_of(const QuadrupleQuery& q) {
  quadruple_box(q.d);
  if (q.fixed && (q.fixed->first < 0 || q.fixed->first > 3)) throw DomainError("pinned index must be 0..3");
  return {q.K1, q.K2, q.d};
}

}  // namespace

mpz_class quadruple_count_by_enumeration(const QuadrupleQuery& q) {
  const Problem p = problem_of(q);
  if (q.fixed) return enumerate_pinned(p, q.fixed->first, q.fixed->second);
  mpz_class count = 0;
  for (long v : admissible_values(p.d)) count += enumerate_pinned(p, 0, v);
  return count;
}

mpz_class quadruple_count_by_divisors(const QuadrupleQuery& q) {
  const Problem p = problem_of(q);
  if (q.fixed) return divisors_pinned(p, q.fixed->first, q.fixed->second);
  mpz_class count = 0;
  for (long v : admissible_values(p.d)) count += divisors_pinned(p, 0, v);
  return count;
}

CountReport quadruple_count(const QuadrupleQuery& q) {
  CountReport r;
  r.query["K1"] = q.K1;
  r.query["K2"] = q.K2;
  r.query["d"] = q.d;
  if (q.fixed) r.query["fixed"] = {q.fixed->first, q.fixed->second};
  r.count = quadruple_count_by_enumeration(q);
  r.oracle = quadruple_count_by_divisors(q);
  r.satisfied = r.count == *r.oracle;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

mpz_class factorial(int n) {
  mpz_class f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

mpz_class binomial(int n, int k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b;
}

// Sum over compositions of `left` into `parts` parts, each >= lo, of prod m!.
void compositions(int parts, int left, int lo, const mpz_class& acc, const std::vector<mpz_class>& fact, mpz_class& out) {
  if (parts == 0) {
    if (left == 0) out += acc;
    return;
  }
  for (int m = lo; m <= left - lo * (parts - 1); ++m) compositions(parts - 1, left - m, lo, acc * fact[m], fact, out);
}

std::vector<mpz_class> factorials(int k) {
  std::vector<mpz_class> f(static_cast<std::size_t>(k) + 1);
  f[0] = 1;
  for (int j = 1; j <= k; ++j) f[j] = f[j - 1] * j;
  return f;
}

}  // namespace

mpz_class snk(int N, int k) {
  if (N < 0 || k < 0) throw DomainError("snk needs N, k >= 0");
  if (N == 0) return k == 0 ? 1 : 0;
  mpz_class out = 0;
  compositions(N, k, 0, 1, factorials(k), out);
  return out;
}

mpz_class snk_positive(int k, int r) {
  if (k < 0 || r < 0) throw DomainError("snk_positive needs k, r >= 0");
  if (r == 0) return k == 0 ? 1 : 0;
  if (r > k) return 0;
  mpz_class out = 0;
  compositions(r, k, 1, 1, factorials(k), out);
  return out;
}

mpq_class snk_bound(int N, int k) {
  mpz_class a, b;
  mpz_ui_pow_ui(a.get_mpz_t(), 216, static_cast<unsigned long>(k));
  mpz_ui_pow_ui(b.get_mpz_t(), 12UL * static_cast<unsigned long>(N), static_cast<unsigned long>(k));
  const mpz_class kf = factorial(k);
  mpq_class r(a * kf * kf + b, kf);
  r.canonicalize();
  return r;
}

ExperimentReport snk_bound_check(int N_max, int k_max) {
  if (N_max < 1 || k_max < 0) throw DomainError("snk sweep needs N_max >= 1, k_max >= 0");
  ExperimentReport rep;
  rep.experiment = "snk";
  Table t;
  t.columns = {"N", "k", "S", "bound", "ratio"};
  auto& rows = rep.statistics["table"] = nlohmann::ordered_json::array();
  bool bound_ok = true, rec_ok = true, split_ok = true, prime_ok = true;
  double worst = 0.0;
  std::vector<std::vector<mpz_class>> S(static_cast<std::size_t>(N_max) + 1,
                                        std::vector<mpz_class>(static_cast<std::size_t>(k_max) + 1));
  for (int k = 0; k <= k_max; ++k) S[0][k] = k == 0 ? 1 : 0;
  for (int N = 1; N <= N_max; ++N) {
    for (int k = 0; k <= k_max; ++k) {
      const mpz_class s = snk(N, k);
      S[N][k] = s;
      mpz_class rec = 0;
      for (int m = 0; m <= k; ++m) rec += factorial(m) * S[N - 1][k - m];
      rec_ok = rec_ok && rec == s;
      mpz_class split = k == 0 ? mpz_class(1) : mpz_class(0);
      for (int r = 1; r <= std::min(N, k); ++r) split += binomial(N, r) * snk_positive(k, r);
      split_ok = split_ok && split == s;
      const mpq_class b = snk_bound(N, k);
      const bool ok = mpq_class(s) <= b;
      bound_ok = bound_ok && ok;
      const double ratio = mpq_class(mpq_class(s) / b).get_d();
      worst = std::max(worst, ratio);
      t.rows.push_back({static_cast<double>(N), static_cast<double>(k), s.get_d(), b.get_d(), ratio});
      rows.push_back({{"N", N}, {"k", k}, {"S", s.get_str()}, {"bound", b.get_str()}, {"satisfied", ok}});
    }
  }
  for (int k = 1; k <= k_max; ++k) {
    mpz_class six;
    mpz_ui_pow_ui(six.get_mpz_t(), 6, static_cast<unsigned long>(k));
    for (int r = 1; r <= k; ++r) prime_ok = prime_ok && snk_positive(k, r) <= six * factorial(k - r);
  }
  rep.statistics["N_max"] = N_max;
  rep.statistics["k_max"] = k_max;
  rep.statistics["max_ratio_to_bound"] = worst;
  rep.add_check("S_within_bound", bound_ok, worst, 1.0, "max S_{N,k} / (216^k k! + (12N)^k / k!)");
  rep.add_check("recursion_matches", rec_ok, rec_ok ? 1.0 : 0.0, 1.0);
  rep.add_check("positive_part_split_matches", split_ok, split_ok ? 1.0 : 0.0, 1.0);
  rep.add_check("positive_part_bound", prime_ok, prime_ok ? 1.0 : 0.0, 1.0, "S'_{k,r} <= 6^k (k-r)!");
  rep.tables["snk"] = std::move(t);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

int chi3(long n) {
  const long r = n % 3;
  return r == 0 ? 0 : (r == 1 ? 1 : -1);
}

}  // namespace

ExperimentReport divisor_sweep(const DivisorSweepOptions& o) {
  if (o.eisenstein_K_max < 0 || o.quadruple_instances < 0 || o.d_max < 1) {
    throw DomainError("invalid divisor sweep parameters");
  }
  ExperimentReport rep;
  rep.experiment = "divisor";

  // Histogram over the box that contains every solution up to K_max.
  const long R = eisenstein_radius(o.eisenstein_K_max);
  std::vector<long> hist(static_cast<std::size_t>(o.eisenstein_K_max) + 1, 0);
  for (long a = -R; a <= R; ++a) {
    for (long b = -R; b <= R; ++b) {
      const long k = norm(a, b);
      if (k <= o.eisenstein_K_max) ++hist[static_cast<std::size_t>(k)];
    }
  }
  long mismatches = 0, formula_mismatches = 0, not_multiple_of_six = 0;
  for (long K = 0; K <= o.eisenstein_K_max; ++K) {
    const long c = eisenstein_count(K, std::max(1L, eisenstein_radius(K)));
    mismatches += c != hist[static_cast<std::size_t>(K)];
    if (K >= 1) {
      long r = 0;
      for (long dv = 1; dv <= K; ++dv) {
        if (K % dv == 0) r += chi3(dv);
      }
      formula_mismatches += c != 6 * r;
      not_multiple_of_six += c % 6 != 0;
    }
  }
  rep.statistics["eisenstein_K_max"] = o.eisenstein_K_max;
  rep.statistics["eisenstein_first_counts"] = std::vector<long>(hist.begin(), hist.begin() + std::min<long>(13, o.eisenstein_K_max + 1));
  rep.add_check("eisenstein_matches_enumeration", mismatches == 0, static_cast<double>(mismatches), 0.0);
  rep.add_check("eisenstein_matches_divisor_formula", formula_mismatches == 0, static_cast<double>(formula_mismatches), 0.0,
                "r(K) = 6 sum_{d|K} chi_3(d)");
  rep.add_check("eisenstein_multiple_of_six", not_multiple_of_six == 0, static_cast<double>(not_multiple_of_six), 0.0);

  // Random instances built from actual quadruples, one coordinate pinned.
  Table t;
  t.columns = {"d", "K1", "K2", "pinned_index", "pinned_value", "enumerated", "oracle", "sign_flipped"};
  long quad_mismatch = 0, flip_mismatch = 0;
  for (int j = 0; j < o.quadruple_instances; ++j) {
    std::mt19937_64 eng(stream_seed(o.seed, static_cast<std::uint64_t>(j)));
    const int d = 2 + static_cast<int>(eng() % static_cast<std::uint64_t>(std::max(1, o.d_max - 1)));
    const auto vals = admissible_values(d);
    std::array<long, 4> n{};
    for (;;) {
      for (auto& v : n) v = vals[eng() % vals.size()];
      bool ok = true;
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) ok = ok && n[a] + n[b] != 0;
      }
      if (ok) break;
    }
    QuadrupleQuery q;
    q.d = d;
    for (long v : n) {
      q.K1 += v;
      q.K2 += std::abs(v) * v;
    }
    const int idx = static_cast<int>(eng() % 4);
    q.fixed = std::make_pair(idx, n[idx]);
    const CountReport cr = quadruple_count(q);
    QuadrupleQuery flipped = q;
    flipped.K1 = -q.K1;
    flipped.K2 = -q.K2;
    flipped.fixed = std::make_pair(idx, -n[idx]);
    const mpz_class f = quadruple_count_by_enumeration(flipped);
    quad_mismatch += !cr.satisfied || cr.count < 1;
    flip_mismatch += f != cr.count;
    t.rows.push_back({static_cast<double>(d), static_cast<double>(q.K1), static_cast<double>(q.K2),
                      static_cast<double>(idx), static_cast<double>(n[idx]), cr.count.get_d(), cr.oracle->get_d(),
                      f.get_d()});
  }
  rep.statistics["quadruple_instances"] = o.quadruple_instances;
  rep.add_check("quadruple_matches_factorization", quad_mismatch == 0, static_cast<double>(quad_mismatch), 0.0);
  rep.add_check("quadruple_sign_flip_symmetry", flip_mismatch == 0, static_cast<double>(flip_mismatch), 0.0);
  rep.tables["quadruples"] = std::move(t);
  return rep;
}

}  // namespace bolab
