#pragma once
// Combinatorial internals behind the permutable-convergence theorem: the
// decidable plus-tail predicate phi, fuel-bounded membership search kappa
// into S = {n : exists m with phi(m,n) = 0}, the lambda bit stream with
// its three structural properties, bad intervals, the positives-first
// permutation sigma, the block-sum witness, rationalization of real
// terms, and the per-window tail-bound check.

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "serex/permutation.hpp"
#include "serex/stream.hpp"

namespace serex {

// phi(m, n) = 0 iff m > n and sum_{i=n+1}^m a_i^+ >= eps. In general phi
// is pinned down only by two one-sided implications; with rational terms
// the comparison is decidable, so phi is defined by it outright and both
// implications follow.
class PlusTailPredicate {
 public:
  PlusTailPredicate(TermStream series, Rational eps);

  int phi(Index m, Index n) const;
  Rational plus_window(Index n, Index m) const;  // sum_{i=n+1}^m a_i^+
  Rational plus_term(Index i) const;             // a_i^+

  const Rational& eps() const { return eps_; }
  const TermStream& series() const { return series_; }

 private:
  TermStream series_;
  Rational eps_;
};

struct SMembership {
  enum class Status { member, unknown };
  Status status = Status::unknown;
  Index value = 0;  // member: minimal m; unknown: searched_up_to

  static SMembership member(Index m) { return {Status::member, m}; }
  static SMembership unknown(Index searched_up_to) { return {Status::unknown, searched_up_to}; }
  bool is_member() const { return status == Status::member; }
};

// min{m <= n + fuel : phi(m, n) = 0}, or unknown(n + fuel). Membership in
// S is only semi-decidable, so the search carries explicit fuel.
SMembership kappa(const PlusTailPredicate& p, Index n, Index fuel);

// One entry of an increasing sequence through S: the value s_n and a
// witness m with phi(m, s_n) = 0. Witnesses are re-verified exactly when
// the construction consumes them.
struct SSeqEntry {
  Index value = 0;
  Index witness = 0;
};

// The lambda bit stream: lambda_1 = 0; from a 0-position the stream stays
// 0 while s_{n+1} <= n+1 and opens a 1-run otherwise (recording the
// membership witness the run start inherits from s_{n+1}); a 1-run
// [lo, ...] closes right after position kappa(lo). Properties on every
// realized prefix:
//   (sigma0) 0->1 transition at n+1 implies n+1 in S, witness recorded;
//   (event)  0->0 transition at n+1 implies s_{n+1} <= n+1;
//   (nopanic) every run closes: the closing index is kappa(lo) itself.
class LambdaStream {
 public:
  struct State;

  int bit(Index n) const;
  void ensure(Index n) const;

  // Start of the 1-run containing n (0 when bit(n) = 0).
  Index run_start(Index n) const;
  // Membership witness recorded when the run starting at lo opened.
  Index run_witness(Index lo) const;

  explicit LambdaStream(std::shared_ptr<State> st) : st_(std::move(st)) {}
  std::shared_ptr<State> state() const { return st_; }

 private:
  std::shared_ptr<State> st_;
};

LambdaStream lambda_stream(const PlusTailPredicate& p, std::function<SSeqEntry(Index)> s_seq);

// Maximal 1-run delimited by 0s on both sides.
struct BadInterval {
  Index lo = 0, hi = 0;
};

// Maximal closed 1-runs within [1, upto] (a run still open at upto is
// excluded: its closing 0 has not been observed).
std::vector<BadInterval> bad_intervals(const LambdaStream& ls, Index upto);

// sigma(n) = n off the intervals; inside [lo, hi], the indices with
// a_i^+ > 0 come first in increasing order, the rest after, so sigma
// restricted to each interval is a bijection of that interval.
Permutation sigma_from_lambda(const TermStream& a, std::vector<BadInterval> intervals);

// Exact block-sum witness for a kappa-closed interval: j and k with
// iv.lo - 1 <= j < k and sum_{i=j+1}^k a_{sigma(i)} >= eps. j = iv.lo
// works when the interval opens on a positive term; otherwise the block
// must also pick up position lo, giving j = iv.lo - 1.
std::pair<Index, Index> verify_sig1(const TermStream& a, const Permutation& sigma,
                                    const BadInterval& iv, const Rational& eps);

// Oracle for a stream of real terms: oracle(i, eta) is a rational within
// eta of the i-th term. Must be sound and pure.
using RealOracle = std::function<Rational(Index, const Rational&)>;

struct Rationalized {
  // r_i = a_i + b_i with 0 < b_i < 2^{-i}: the oracle is queried at
  // precision 2^{-i-2} and the result rounded up to the next multiple of
  // 2^{-i-2} strictly above approximation + error.
  TermStream terms;
  // Certified enclosure of the shift b_i from a fresh oracle query at
  // precision eta.
  std::function<std::pair<Rational, Rational>(Index, const Rational&)> shift_bounds;
};

Rationalized rationalize(RealOracle oracle);

struct TailCheck {
  bool pass = false;
  Rational sum;  // the exact window sum (the falsifying witness on fail)
};

// pass iff sum_{i=n+1}^m a_i^+ <= eps exactly; requires m > n >= N >= 1.
TailCheck tail_bound_check(const PlusTailPredicate& p, Index n_floor, Index n, Index m);

}  // namespace serex
