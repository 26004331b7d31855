// Core substrate tests: exact rationals, streams, partial sums, moduli,
// permutations, bracketings. Expected values here were produced by
// independent oracles: direct rational folds for prefix sums, a prefix
// scan for coverage, and the dyadic ln 2 series with a certified tail for
// the limit checks.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "serex/bracketing.hpp"
#include "serex/permutation.hpp"
#include "serex/series_zoo.hpp"

using namespace serex;

namespace {

Rational rat(long n, long d = 1) { return make_rational(n, d); }

// Independent summation oracle: plain canonical rational fold.
Rational naive_prefix(const TermStream& s, Index n) {
  Rational acc;
  for (Index i = 1; i <= n; ++i) acc += s.term(i);
  return acc;
}

// ln 2 = sum_{k>=1} 1/(k 2^k), tail after K terms below 2^{-K}.
Rational ln2_oracle(long terms = 60) {
  Rational acc;
  for (long k = 1; k <= terms; ++k) acc += make_rational(1, 1) / (Rational(k) * pow2(k));
  return acc;
}

}  // namespace

TEST_CASE("rational parse/format round trip") {
  CHECK(to_string(*parse_rational("-7/12")) == "-7/12");
  CHECK(to_string(*parse_rational("4/2")) == "2");     // canonicalized
  CHECK(to_string(*parse_rational("-0/5")) == "0");
  CHECK(to_string(rat(7, 12)) == "7/12");
  CHECK(!parse_rational("1/0").has_value());
  CHECK(!parse_rational("1/2/3").has_value());
  CHECK(!parse_rational("a").has_value());
  CHECK(!parse_rational("1.5").has_value());
  CHECK(*parse_rational("-6/4") == rat(-3, 2));
}

TEST_CASE("running sum matches the naive fold") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 20; ++round) {
    RunningSum acc;
    Rational naive;
    for (int i = 0; i < 50; ++i) {
      const long num = static_cast<long>(rng() % 41) - 20;
      const long den = static_cast<long>(rng() % 30) + 1;
      const Rational t = rat(num, den);
      if (i % 7 == 3) {
        acc.subtract(t);
        naive -= t;
      } else {
        acc.add(t);
        naive += t;
      }
    }
    CHECK(acc.value() == naive);
    CHECK(acc.compare(naive) == 0);
    CHECK(acc.abs_diff_le(naive, Rational(0)));
    // round_up: smallest grid point at or above the value
    const Rational up = acc.round_up(1000);
    CHECK(up >= naive);
    CHECK(up - naive < rat(1, 1000));
  }
}

TEST_CASE("index maps validate sparse probes") {
  SUBCASE("monotone map accepts out-of-order realization") {
    IndexMap f([](Index k) { return 3 * k - 2; });
    CHECK(f.at(10) == 28);
    CHECK(f.at(5) == 13);
    CHECK(f.at(1) == 1);
  }
  SUBCASE("non-increase caught between realized neighbors") {
    IndexMap f([](Index k) { return k == 5 ? Index{40} : 3 * k - 2; });
    CHECK(f.at(10) == 28);
    CHECK_THROWS_AS(f.at(5), spec_error);  // f(5) = 40 >= f(10) = 28
  }
  SUBCASE("lower bound search finds the minimal k") {
    IndexMap dyadic([](Index k) { return Index{1} << (k - 1); });
    CHECK(index_map_lower_bound(dyadic, 1, 1) == 1);
    CHECK(index_map_lower_bound(dyadic, 9, 1) == 5);   // f(5) = 16 >= 9, f(4) = 8 < 9
    CHECK(index_map_lower_bound(dyadic, 16, 1) == 5);  // exact hit
    CHECK(index_map_lower_bound(dyadic, 16, 6) == 6);  // floor at lo_k
    IndexMap ident([](Index k) { return k; });
    CHECK(index_map_lower_bound(ident, 12345, 1) == 12345);
  }
}

TEST_CASE("partial_sum basics") {
  CHECK(partial_sum(zoo::zero_series().terms, 10) == 0);
  CHECK(partial_sum(zoo::alt_harmonic().terms, 0) == 0);
  CHECK(partial_sum(zoo::alt_harmonic().terms, 4) == rat(7, 12));
  // cross-check the accumulator against the independent fold
  CHECK(partial_sum(zoo::alt_harmonic().terms, 37) == naive_prefix(zoo::alt_harmonic().terms, 37));
}

TEST_CASE("bracketing blocks and telescoping") {
  const ConvergentSeries ah = zoo::alt_harmonic();
  SUBCASE("identity bracketing reproduces the series") {
    Bracketing br = bracket_series(ah.terms, [](Index k) { return k; });
    for (Index k = 1; k <= 12; ++k) CHECK(br.blocks.term(k) == ah.terms.term(k));
  }
  SUBCASE("odd bracketing of alt-harmonic") {
    Bracketing br = bracket_series(ah.terms, [](Index k) { return 2 * k - 1; });
    CHECK(br.blocks.term(1) == rat(1, 2));
    CHECK(br.blocks.term(2) == rat(1, 12));
  }
  SUBCASE("f(1) != 1 rejected") {
    CHECK_THROWS_AS(bracket_series(ah.terms, [](Index k) { return k + 1; }), spec_error);
  }
  SUBCASE("non-increase detected lazily") {
    Bracketing br = bracket_series(ah.terms, [](Index k) { return k <= 2 ? k : 2; });
    CHECK_THROWS_AS(br.blocks.term(3), spec_error);
  }
  SUBCASE("telescoping exactness") {
    Bracketing br = bracket_series(ah.terms, [](Index k) { return (k * (k + 1)) / 2; });
    for (Index K : {1, 3, 7, 11}) {
      CHECK(partial_sum(br.blocks, K) == partial_sum(ah.terms, br.f.at(K + 1) - 1));
    }
  }
}

TEST_CASE("permutations: identity, swap, coverage") {
  const ConvergentSeries ah = zoo::alt_harmonic();
  SUBCASE("identity") {
    TermStream t = apply_permutation(ah.terms, identity_permutation());
    for (Index n = 1; n <= 20; ++n) CHECK(t.term(n) == ah.terms.term(n));
    CHECK(coverage_index(identity_permutation(), 100) == 100);
  }
  SUBCASE("transposition 1<->2") {
    TermStream t = apply_permutation(ah.terms, transposition(1, 2));
    CHECK(t.term(1) == rat(-1, 2));
    CHECK(t.term(2) == rat(1));
  }
  SUBCASE("two-pos-one-neg prefix and coverage") {
    TermStream t = apply_permutation(ah.terms, zoo::two_pos_one_neg());
    const Rational expect[] = {rat(1), rat(1, 3), rat(-1, 2), rat(1, 5), rat(1, 7), rat(-1, 4)};
    for (Index n = 1; n <= 6; ++n) CHECK(t.term(n) == expect[n - 1]);
    CHECK(coverage_index(zoo::two_pos_one_neg(), 4) == 6);
  }
  SUBCASE("broken coverage certificate") {
    Permutation bad([](Index n) { return n + 1; }, [](Index n) { return n + 1; });
    CHECK_THROWS_AS(coverage_index(bad, 5), certificate_violation);
  }
  SUBCASE("injectivity violation propagates") {
    Permutation bad([](Index) { return Index{1}; }, [](Index n) { return n; });
    TermStream t = apply_permutation(ah.terms, bad);
    CHECK(t.term(1) == rat(1));
    CHECK_THROWS_AS(t.term(2), injectivity_violation);
  }
}

TEST_CASE("permutation prefix injectivity and coverage scans (sampled)") {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Permutation p = zoo::block_shuffle(seed);
    for (int round = 0; round < 8; ++round) {
      const Index n = 1 + static_cast<Index>(rng() % 200);
      CHECK(coverage_index(p, n) >= n);
    }
    // injectivity over a realized prefix
    for (Index i = 1; i <= 300; ++i) (void)p.image(i);
  }
}

TEST_CASE("limit_approx") {
  SUBCASE("zero series") { CHECK(limit_approx(zoo::zero_series(), rat(1, 100)) == 0); }
  SUBCASE("geometric -1/2 within 1/100 of -1/3") {
    const Rational r = limit_approx(zoo::geometric(rat(-1, 2)), rat(1, 100));
    CHECK(abs(r - rat(-1, 3)) <= rat(1, 100));
  }
  SUBCASE("alt-harmonic within 1/10 of ln 2") {
    const Rational r = limit_approx(zoo::alt_harmonic(), rat(1, 10));
    // oracle error < 2^-60, folded into the tolerance
    CHECK(abs(r - ln2_oracle()) <= rat(1, 10) + pow2(-60));
  }
  SUBCASE("rearranged alt-harmonic within 1/10 of (3/2) ln 2") {
    const Rational r = limit_approx(zoo::two_pos_one_neg_alt_harmonic(), rat(1, 10));
    CHECK(abs(r - rat(3, 2) * ln2_oracle()) <= rat(1, 10) + pow2(-58));
  }
}

TEST_CASE("cauchy moduli verify on sampled windows") {
  std::mt19937_64 rng(23);
  auto verify = [&](const ConvergentSeries& cs, const std::vector<Rational>& epss) {
    for (const Rational& eps : epss) {
      const Index n0 = cs.modulus.at(eps);
      for (int round = 0; round < 12; ++round) {
        const Index m = n0 + static_cast<Index>(rng() % 50);
        const Index m2 = m + static_cast<Index>(rng() % 80);
        CHECK(abs(window_sum(cs.terms, m, m2)) <= eps);
      }
    }
  };
  verify(zoo::alt_harmonic(), {rat(1, 2), rat(1, 7), rat(1, 50)});
  verify(zoo::geometric(rat(-1, 2)), {rat(1, 4), rat(1, 100)});
  verify(zoo::geometric(rat(2, 3)), {rat(1, 5), rat(1, 64)});
  verify(zoo::two_pos_one_neg_alt_harmonic(), {rat(1, 2), rat(1, 9), rat(1, 40)});
  verify(zoo::one_pos_two_neg_alt_harmonic(), {rat(1, 2), rat(1, 9), rat(1, 40)});
  verify(zoo::log_harmonic(), {rat(1, 2), rat(1, 5)});
  verify(zoo::literal_series({rat(3), rat(-2, 7), rat(5, 3)}), {rat(1, 9)});
}

TEST_CASE("modulus indices are monotone nonincreasing in eps") {
  auto check = [](const ConvergentSeries& cs) {
    Index prev = -1;
    for (const Rational& eps : {rat(1, 64), rat(1, 16), rat(1, 4), rat(1, 2), rat(2)}) {
      const Index n = cs.modulus.at(eps);
      if (prev >= 0) CHECK(n <= prev);
      prev = n;
    }
  };
  check(zoo::alt_harmonic());
  check(zoo::geometric(rat(-1, 2)));
  check(zoo::two_pos_one_neg_alt_harmonic());
}

TEST_CASE("rearrangement of absolutely convergent series keeps the sum (desk scale)") {
  const Rational q = rat(-1, 2);
  const ConvergentSeries geo = zoo::geometric(q);
  std::vector<Permutation> perms = {identity_permutation(), zoo::two_pos_one_neg(),
                                    zoo::block_shuffle(5), zoo::block_shuffle(99)};
  for (const Permutation& p : perms) {
    const ConvergentSeries re = zoo::rearranged_geometric(q, p);
    for (const Rational& eps : {rat(1, 100), rat(1, 4096)}) {
      const Rational a = limit_approx(geo, eps);
      const Rational b = limit_approx(re, eps);
      CHECK(abs(a - b) <= 2 * eps);
    }
  }
}
