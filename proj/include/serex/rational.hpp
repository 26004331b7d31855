#pragma once
// Exact rational arithmetic. Every value in the library is a GMP rational
// kept in lowest terms with a positive denominator; nothing ever rounds.
// Serialization: "p/q", or just "p" when the denominator is 1.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace serex {

using Index = std::int64_t;
using BigInt = mpz_class;
using Rational = mpq_class;

// Canonicalizing constructors. den must be nonzero.
Rational make_rational(const BigInt& num, const BigInt& den);
Rational make_rational(long num, long den);

// Accepts "p", "-p", "p/q" (q > 0 after canonicalization). Returns nullopt
// on malformed input or zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

inline int sign(const Rational& q) { return mpq_sgn(q.get_mpq_t()); }

inline Rational abs(const Rational& q) {
  Rational r;
  mpq_abs(r.get_mpq_t(), q.get_mpq_t());
  return r;
}

// 2^k as an exact rational, k may be negative.
Rational pow2(long k);

// Exact accumulator for long sums of rationals. The running value is kept
// as num/den without reduction to lowest terms: each new term only grows
// the denominator by the factor needed to absorb it, so adding a term and
// comparing against a rational are linear in the accumulated denominator
// size. (Reducing on every step would cost a large gcd per term, which
// dominates at 10^5-term scale.)
class RunningSum {
 public:
  RunningSum();

  void add(const Rational& t);
  void subtract(const Rational& t);
  void reset();

  int sign() const { return mpz_sgn(num_.get_mpz_t()); }
  bool is_zero() const { return sign() == 0; }

  // sign of (this - x)
  int compare(const Rational& x) const;
  // |this - x| <= bound, bound >= 0
  bool abs_diff_le(const Rational& x, const Rational& bound) const;
  // |this| > bound, bound >= 0
  bool abs_gt(const Rational& bound) const;

  // Smallest rational of the form m/grid (grid >= 1) that is >= the
  // current value. Used to derive cheap small-denominator upper bounds.
  Rational round_up(long grid) const;

  Rational value() const;  // canonical form

 private:
  BigInt num_, den_;
  mutable BigInt t1_, t2_, t3_;  // scratch
};

}  // namespace serex
