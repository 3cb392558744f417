#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "bolab/combinatorics.hpp"
#include "bolab/errors.hpp"

using namespace bolab;

namespace {

// Every (m1, m2) in a generous square, bucketed by norm.
std::map<long, long> eisenstein_histogram(long K_max) {
  std::map<long, long> h;
  const long B = static_cast<long>(std::ceil(2.0 * std::sqrt(K_max / 3.0))) + 2;
  for (long a = -B; a <= B; ++a)
    for (long b = -B; b <= B; ++b) {
      const long k = a * a + a * b + b * b;
      if (k <= K_max) ++h[k];
    }
  return h;
}

int chi3(long d) { return d % 3 == 0 ? 0 : (d % 3 == 1 ? 1 : -1); }

bool entry_ok(long n, int d) {
  const long box = (1L << (d + 1)) - 1;
  return std::abs(n) <= box && std::sqrt(1.0 + static_cast<double>(n * n)) >= std::pow(2.0, 0.9 * d);
}

// Naive quadruple count over the full box.
long naive_quadruples(long K1, long K2, int d, int pin = -1, long pin_value = 0) {
  const long B = (1L << (d + 1)) - 1;
  long count = 0;
  for (long a = -B; a <= B; ++a)
    for (long b = -B; b <= B; ++b)
      for (long c = -B; c <= B; ++c) {
        const long e = K1 - a - b - c;
        const long n[4] = {a, b, c, e};
        if (pin >= 0 && n[pin] != pin_value) continue;
        bool ok = true;
        long q = 0;
        for (int i = 0; i < 4 && ok; ++i) {
          ok = entry_ok(n[i], d);
          q += std::abs(n[i]) * n[i];
        }
        for (int i = 0; i < 4 && ok; ++i)
          for (int j = i + 1; j < 4; ++j) ok = ok && n[i] + n[j] != 0;
        if (ok && q == K2) ++count;
      }
  return count;
}

}  // namespace

TEST_CASE("Eisenstein counts") {
  CHECK(eisenstein_count(0, 1) == 1);
  CHECK(eisenstein_count(1, 2) == 6);
  CHECK(eisenstein_count(2, 2) == 0);
  CHECK(eisenstein_count(3, 2) == 6);
  CHECK(eisenstein_count(7, 4) == 12);
  CHECK(eisenstein_count(49, 9) == 18);
  CHECK_THROWS_AS(eisenstein_count(5, 0), DomainError);
}

TEST_CASE("Eisenstein completeness radius") {
  // radius floor(2 sqrt(K/3)); a box of ceil(sqrt K) + 1 misses (-8, 16) at K = 192
  CHECK(eisenstein_radius(192) == 16);
  CHECK(-8 * -8 + -8 * 16 + 16 * 16 == 192);
  CHECK_THROWS_AS(eisenstein_count(192, 15), DomainError);
  CHECK(eisenstein_count(192, 16) == eisenstein_count(192, 100));
  for (long K = 0; K <= 3000; ++K) {
    long far = 0;
    for (auto [a, b] : eisenstein_solutions(K)) far = std::max({far, std::abs(a), std::abs(b)});
    CHECK(far <= eisenstein_radius(K));
  }
}

TEST_CASE("Eisenstein counts against brute force and r(K) = 6 sum chi_3") {
  const long K_max = 10000;
  const auto h = eisenstein_histogram(K_max);
  for (long K = 0; K <= K_max; ++K) {
    const auto it = h.find(K);
    const long brute = it == h.end() ? 0 : it->second;
    const long c = eisenstein_count(K, eisenstein_radius(K) + 1);
    REQUIRE(c == brute);
    if (K >= 1) {
      CHECK(c % 6 == 0);
      long s = 0;
      for (long d = 1; d <= K; ++d)
        if (K % d == 0) s += chi3(d);
      CHECK(c == 6 * s);
    }
  }
}

TEST_CASE("quadruple filters") {
  CHECK(quadruple_box(1) == 3);
  CHECK(quadruple_box(6) == 127);
  CHECK_THROWS_AS(quadruple_box(0), DomainError);
  for (int d = 1; d <= 6; ++d)
    for (long n = -200; n <= 200; ++n) CHECK(quadruple_entry_admissible(n, d) == entry_ok(n, d));
}

TEST_CASE("quadruple counts against a naive enumeration") {
  std::mt19937_64 g(42);
  for (int d = 2; d <= 4; ++d) {
    const long B = quadruple_box(d);
    std::vector<long> vals;
    for (long x = -B; x <= B; ++x)
      if (entry_ok(x, d)) vals.push_back(x);
    std::uniform_int_distribution<std::size_t> pick(0, vals.size() - 1);
    int nonzero = 0;
    for (int trial = 0; trial < 12; ++trial) {
      // data from an actual admissible quadruple so that counts are not all zero
      long n[4];
      bool distinct_sums = false;
      while (!distinct_sums) {
        for (auto& x : n) x = vals[pick(g)];
        distinct_sums = true;
        for (int i = 0; i < 4; ++i)
          for (int j = i + 1; j < 4; ++j) distinct_sums = distinct_sums && n[i] + n[j] != 0;
      }
      const long K1 = n[0] + n[1] + n[2] + n[3];
      long K2 = 0;
      for (long x : n) K2 += std::abs(x) * x;
      const int pin = trial % 4;
      const long naive_pinned = naive_quadruples(K1, K2, d, pin, n[pin]);
      const QuadrupleQuery q{K1, K2, d, std::make_pair(pin, n[pin])};
      CHECK(quadruple_count_by_enumeration(q) == naive_pinned);
      CHECK(quadruple_count_by_divisors(q) == naive_pinned);
      const CountReport rep = quadruple_count(q);
      CHECK(rep.satisfied);
      CHECK(rep.count == naive_pinned);
      nonzero += naive_pinned > 0;

      if (d <= 3) {
        const QuadrupleQuery all{K1, K2, d, std::nullopt};
        const long naive_all = naive_quadruples(K1, K2, d);
        CHECK(quadruple_count_by_enumeration(all) == naive_all);
        CHECK(quadruple_count_by_divisors(all) == naive_all);
      }
      // simultaneous sign flip
      const QuadrupleQuery flip{-K1, -K2, d, std::make_pair(pin, -n[pin])};
      CHECK(quadruple_count_by_enumeration(flip) == quadruple_count_by_enumeration(q));
    }
    CHECK(nonzero == 12);
  }
}

TEST_CASE("zero data admits no quadruple at small d") {
  for (int d = 1; d <= 4; ++d) {
    CHECK(naive_quadruples(0, 0, d) == 0);
    CHECK(quadruple_count_by_enumeration({0, 0, d, std::nullopt}) == 0);
  }
}

TEST_CASE("CountReport JSON") {
  CountReport r = quadruple_count({0, 0, 2, std::make_pair(0, 5L)});
  const auto j = r.to_json();
  CHECK(j["count"] == "0");
  CHECK(j["oracle"] == "0");
  CHECK(j["satisfied"] == true);
  CHECK(j["query"]["d"] == 2);
}

TEST_CASE("S_{N,k}") {
  for (int N = 0; N <= 6; ++N) CHECK(snk(N, 0) == 1);
  mpz_class f = 1;
  for (int k = 1; k <= 10; ++k) {
    f *= k;
    CHECK(snk(1, k) == f);
  }
  CHECK(snk(2, 2) == 5);
  CHECK(snk(3, 2) == 9);  // three 2!'s and three 1!1!'s
  CHECK(snk(0, 3) == 0);

  // recursion S_{N,k} = sum_m m! S_{N-1,k-m}
  for (int N = 1; N <= 8; ++N) {
    for (int k = 0; k <= 8; ++k) {
      mpz_class acc = 0, fm = 1;
      for (int m = 0; m <= k; ++m) {
        if (m > 0) fm *= m;
        acc += fm * snk(N - 1, k - m);
      }
      CHECK(snk(N, k) == acc);
    }
  }

  // S'_{k,r}: compositions into positive parts
  CHECK(snk_positive(3, 1) == 6);
  CHECK(snk_positive(3, 2) == 4);  // (1,2), (2,1)
  CHECK(snk_positive(3, 3) == 1);
  CHECK(snk_positive(2, 3) == 0);
}

TEST_CASE("S_{N,k} bound") {
  CHECK(snk_bound(1, 0) == 2);
  CHECK(snk_bound(3, 2) == mpq_class(216 * 216 * 2 + 36 * 36 / 2));
  for (int N = 1; N <= 8; ++N)
    for (int k = 0; k <= 8; ++k) CHECK(mpq_class(snk(N, k)) <= snk_bound(N, k));
  const ExperimentReport r = snk_bound_check(8, 8);
  CHECK(r.passed());
  CHECK(r.checks.size() == 4);
}

TEST_CASE("divisor sweep") {
  DivisorSweepOptions o;
  o.eisenstein_K_max = 2000;
  o.quadruple_instances = 30;
  o.d_max = 4;
  const ExperimentReport r = divisor_sweep(o);
  INFO(r.to_json()["checks"].dump());
  CHECK(r.passed());
}
