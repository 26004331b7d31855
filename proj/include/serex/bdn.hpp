#pragma once
// Lemma 5 machinery: from an inhabited, countable, pseudobounded set,
// build the weak-permutably convergent alternating series, a convergent
// bracketing of any coverage-certified rearrangement of it, and the
// boundedness detector.
//
// Magnitudes are normalized as a_n = lambda_k / n for 2^k < n <= 2^{k+1}
// and a_n = 0 for n <= 2; under this indexing every stated block bound
// verifies exactly (block mass > 1/2, within-block windows < 2^{-k},
// windows past 2^k bounded by 2^{-(k-1)}).

#include <functional>
#include <memory>
#include <vector>

#include "serex/bracketing.hpp"
#include "serex/permutation.hpp"
#include "serex/stream.hpp"

namespace serex {

// Memoized stream of positive integers.
class IntStream {
 public:
  using Fn = std::function<Index(Index)>;
  static constexpr Index kDefaultMemoCap = Index{1} << 23;

  explicit IntStream(Fn fn, Index memo_cap = kDefaultMemoCap);
  Index at(Index n) const;

 private:
  struct State {
    Fn fn;
    Index cap;
    std::vector<Index> vals;
    std::vector<char> present;
  };
  std::shared_ptr<State> st_;
};

// Pseudoboundedness ("every sequence through S is eventually below its
// index") quantifies over all sequences, so no finite scan can certify
// it; the modulus is a trusted oracle field. It receives a sequence
// through S and must return N with seq(n) < n for all n >= N. Stock
// constructors ship honest oracles for bounded sets and a deliberately
// lying one for the identity set (which is not pseudobounded).
using PbOracle = std::function<Index(const std::function<Index(Index)>&)>;

struct PseudoboundedSet {
  IntStream enumerate;  // n >= 1 -> s_n, positive integers
  PbOracle pb_modulus;
};

PseudoboundedSet make_set(IntStream::Fn enumerate, PbOracle oracle);
PseudoboundedSet make_finite_sup_set(std::vector<Index> values);  // values then constant tail
PseudoboundedSet make_custom_set(std::vector<Index> prefix);      // alias shape: prefix + constant tail
PseudoboundedSet make_identity_set();                             // s_n = n, lying oracle

// enumerate'(n) = max{enumerate(m) : m <= n}; same oracle semantics.
PseudoboundedSet monotone_closure(const PseudoboundedSet& set);

// lambda_k = 1 iff s_{2^{k+1}} > s_{2^k} on the monotone closure.
// Requires a monotone-closed set; k is limited to desk scale (<= 22).
int lambda_bit(const PseudoboundedSet& set, Index k);

// The bit sequence (lambda_k) as a value.
struct LambdaSeq {
  std::function<int(Index)> bit;
};

LambdaSeq lambda_seq(const PseudoboundedSet& set);  // set monotone-closed

Rational bdn_magnitude(const PseudoboundedSet& set, Index n);
Rational bdn_term(const PseudoboundedSet& set, Index n);  // (-1)^n a_n

// 2^{-(k-1)}: any window of the signed series starting past 2^k has
// absolute sum at most this (chained dyadic-block estimate).
Rational bdn_cauchy_bound(Index k);

struct BdnSeries {
  TermStream magnitudes;
  TermStream signed_terms;
  CauchyModulus modulus;  // for the signed series
};

BdnSeries bdn_series(const PseudoboundedSet& set);  // set monotone-closed

// The (j_k, n_k) construction: strictly increasing sequences with
//   (a) 2^{j_k} < n_k < 2^{j_{k+1}},
//   (b) {1..2^{j_k}} within sigma([1..n_k]) within {1..2^{j_{k+1}}},
//   (c) windows of the signed series from 2^{j_k} bounded by 2^{-k+1},
// plus the pseudoboundedness-driven selection k_1 < k_2 < ... of indices
// whose lambda-window [j_{k_i}, j_{k_i+1}) is all zero. Block boundaries
// sit at the selected n's; realized block i has |sum| < 2^{-k_i} exactly.
class WeakBracketing {
 public:
  struct State;

  Index j_at(Index k) const;
  Index n_at(Index k) const;
  Index selected_k(Index i) const;

  // Exact sum of bracketing block i+1 (positions (n_{k_i}, n_{k_{i+1}}]);
  // verifies |sum| < 2^{-k_i}.
  Rational selected_block_sum(Index i) const;

  // The induced bracketing of the sigma-rearranged signed series:
  // f(1) = 1, f(i+1) = n_{k_i} + 1.
  Bracketing blocks() const;

  // Modulus for the bracketed series by comparison with sum 2^{-k_i}.
  CauchyModulus block_modulus() const;

  explicit WeakBracketing(std::shared_ptr<State> st) : st_(std::move(st)) {}
  std::shared_ptr<State> state() const { return st_; }

 private:
  std::shared_ptr<State> st_;
};

WeakBracketing weak_bracketing(const PseudoboundedSet& set, const Permutation& sigma);

// Lemma 5 (ii) / Theorem 2 glue: under the tail certificate "lambda_k = 0
// for all k in (N, N+range]" (plus sampled domination checks), s_{2^N}
// bounds the whole set. Throws tail_violation when the certificate fails.
Index bounded_from_convergence(const PseudoboundedSet& set, Index n_exp, Index range);

}  // namespace serex
