#pragma once

// Exact counting: Eisenstein norms, four-frequency resonant quadruples, and the
// factorial composition sums S_{N,k}.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "bolab/report.hpp"

namespace bolab {

struct CountReport {
  nlohmann::ordered_json query = nlohmann::ordered_json::object();
  mpz_class count = 0;
  std::optional<mpq_class> bound;   ///< exact bound, when one applies
  std::optional<mpz_class> oracle;  ///< independently derived count, when computed
  bool satisfied = true;            ///< count <= bound and count == oracle where present

  nlohmann::ordered_json to_json() const;
};

/// Largest |m1| (or |m2|) with m1^2 + m1 m2 + m2^2 = K, i.e. floor(2 sqrt(K/3)).
long eisenstein_radius(long K);

/// All (m1, m2) with m1^2 + m1 m2 + m2^2 = K.
std::vector<std::pair<long, long>> eisenstein_solutions(long K);

/// Number of (m1, m2) with |m1|, |m2| <= box and m1^2 + m1 m2 + m2^2 = K.
/// Throws DomainError when box < eisenstein_radius(K) (the count could be incomplete).
long eisenstein_count(long K, long box);

struct QuadrupleQuery {
  long K1 = 0;
  long K2 = 0;
  int d = 1;
  std::optional<std::pair<int, long>> fixed;  ///< (index 0..3, value)
};

/// The filters applied to each n_l: 2^{0.9 d} <= <n> and |n| <= 2^{d+1} - 1.
bool quadruple_entry_admissible(long n, int d);
long quadruple_box(int d);

/// n0+n1+n2+n3 = K1, sum |n_l| n_l = K2, no two entries summing to zero, every entry admissible.
/// Counts ordered quadruples by direct enumeration; the oracle is the divisor factorization
/// of the pinned problem (or the sum of pinned oracles when nothing is pinned).
CountReport quadruple_count(const QuadrupleQuery& q);
/// The factorization oracle alone.
mpz_class quadruple_count_by_divisors(const QuadrupleQuery& q);
/// Direct enumeration alone.
mpz_class quadruple_count_by_enumeration(const QuadrupleQuery& q);

/// S_{N,k} = sum over weak compositions m_1+...+m_N = k of prod m_j!.
mpz_class snk(int N, int k);
/// S'_{k,r} = the same over compositions into r positive parts.
mpz_class snk_positive(int k, int r);
/// 216^k k! + (12N)^k / k!.
mpq_class snk_bound(int N, int k);

/// S_{N,k} against its bound, the recursion S_{N,k} = sum_m m! S_{N-1,k-m}, the split
/// S_{N,k} = sum_r C(N,r) S'_{k,r}, and S'_{k,r} <= 6^k (k-r)!, for N <= N_max, k <= k_max.
ExperimentReport snk_bound_check(int N_max, int k_max);

struct DivisorSweepOptions {
  long eisenstein_K_max = 10000;
  int quadruple_instances = 100;
  int d_max = 6;
  std::uint64_t seed = 1;
};

/// Eisenstein counts against a histogram enumeration and r(K) = 6 sum_{d | K} chi_3(d),
/// plus random pinned quadruple instances against the factorization oracle and sign-flip symmetry.
ExperimentReport divisor_sweep(const DivisorSweepOptions& opts);

}  // namespace bolab
