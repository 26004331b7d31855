#pragma once
// The oscillating permutation tau: given a convergent series with sum s, a
// permutation sigma, and a bracketing of the rearranged series converging
// to t with |s - t| >= delta > 0, build tau and block boundaries (k_i)
// whose blocks all have |sum| > delta/3 in exact arithmetic. On top of it,
// the divergence witness: an index M with sum_{n<=M} |a_n| > C.
//
// Strict comparisons against the limits s and t are only semi-decidable,
// so the caller supplies the order of s and t (`side`) and a rational
// separation certificate delta <= |s - t|; every limit comparison inside
// runs against limit_approx values with error budget delta/12.

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "serex/bracketing.hpp"
#include "serex/permutation.hpp"
#include "serex/stream.hpp"

namespace serex {

enum class Side { s_below_t, t_below_s };

class OscillationWitness {
 public:
  struct State;

  // Block boundary indices k_1 < k_2 < ... (realized lazily).
  Index k(Index i) const;
  Index f_at(Index i) const;  // f(k_i)
  bool is_sigma_side(Index i) const;
  Index realized() const;

  // Exact block sum over positions (f(k_i), f(k_{i+1})]; verifies
  // |sum| > delta/3 and throws modulus_violation otherwise.
  Rational block_sum(Index i) const;

  const Rational& delta() const;
  Rational s_hat() const;
  Rational t_hat() const;

  Permutation tau() const;
  const IndexMap& f() const;

  std::shared_ptr<State> state() const { return st_; }

  explicit OscillationWitness(std::shared_ptr<State> st) : st_(std::move(st)) {}

 private:
  std::shared_ptr<State> st_;
};

// The alternating construction: tau agrees with the identity up to f(k_1),
// then interleaves sigma-prefix completions (partial sums near t) with
// identity completions (partial sums near s).
OscillationWitness build_oscillation(const ConvergentSeries& a, const Permutation& sigma,
                                     const BracketedSeries& br, const Rational& delta, Side side);

// Lemma 2: pick j with (j-1) delta > 3C, cover the tau-prefix up to
// f(k_j) by {1..M}, and return M; the guarantee sum_{n<=M} |a_n| > C is
// established by exact summation of a prefix (|a_n| >= 0 makes prefix
// evidence monotone).
Index divergence_witness(const OscillationWitness& w, const TermStream& a, const Rational& c);

}  // namespace serex
