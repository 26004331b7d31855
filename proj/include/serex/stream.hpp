#pragma once
// Term streams, partial sums, and Cauchy moduli: the substrate the series
// constructions build on. The library is single-threaded by contract
// (README); stream caches are unsynchronized.

#include <functional>
#include <memory>
#include <vector>

#include "serex/errors.hpp"
#include "serex/rational.hpp"

namespace serex {

// Total stream of rationals indexed from 1. term(n) must be deterministic;
// evaluated positions are memoized up to a fixed cap so constructions can
// re-scan prefixes cheaply. term_raw bypasses the cache for long scans.
class TermStream {
 public:
  using Fn = std::function<Rational(Index)>;
  static constexpr Index kDefaultMemoCap = Index{1} << 20;

  explicit TermStream(Fn fn, Index memo_cap = kDefaultMemoCap);

  Rational term(Index n) const;
  Rational term_raw(Index n) const { return st_->fn(n); }

 private:
  struct State {
    Fn fn;
    Index cap;
    std::vector<Rational> vals;
    std::vector<char> present;
  };
  std::shared_ptr<State> st_;
};

// Exact sum of the first n terms; n = 0 gives 0.
Rational partial_sum(const TermStream& s, Index n);

// Exact sum over positions [m, m2] inclusive; empty when m2 < m.
Rational window_sum(const TermStream& s, Index m, Index m2);

// Window-form convergence certificate: for all m' >= m >= at(eps),
// |sum_{i=m}^{m'} a_i| <= eps. N is monotone nonincreasing in eps.
// Certificates are trusted data supplied by series constructors and
// verified opportunistically in tests, not on every call.
class CauchyModulus {
 public:
  using Fn = std::function<Index(const Rational&)>;
  explicit CauchyModulus(Fn fn);
  Index at(const Rational& eps) const;  // requires eps > 0

 private:
  Fn fn_;
};

struct ConvergentSeries {
  TermStream terms;
  CauchyModulus modulus;
};

// partial_sum(terms, N(eps)): within eps of the limit under the modulus
// contract (the tail past N(eps) is a limit of windows bounded by eps).
Rational limit_approx(const ConvergentSeries& cs, const Rational& eps);

}  // namespace serex
