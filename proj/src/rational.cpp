#include "serex/rational.hpp"

#include <cctype>

#include "serex/errors.hpp"

namespace serex {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (mpz_sgn(den.get_mpz_t()) == 0) throw spec_error("rational with zero denominator");
  Rational q;
  mpq_set_num(q.get_mpq_t(), num.get_mpz_t());
  mpq_set_den(q.get_mpq_t(), den.get_mpz_t());
  q.canonicalize();
  return q;
}

Rational make_rational(long num, long den) {
  return make_rational(BigInt(num), BigInt(den));
}

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // mpq_set_str accepts junk like "1/2/3" leniently on some inputs; vet the
  // shape first: optional sign, digits, optional "/digits".
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') ++i;
  std::size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++digits;
  if (digits == 0) return std::nullopt;
  if (i < text.size()) {
    if (text[i] != '/') return std::nullopt;
    ++i;
    std::size_t den_digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++den_digits;
    if (den_digits == 0 || i != text.size()) return std::nullopt;
  }
  if (text.front() == '+') text.remove_prefix(1);  // GMP rejects a leading '+'
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), std::string(text).c_str(), 10) != 0) return std::nullopt;
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0) return std::nullopt;
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const BigInt& z) { return z.get_str(); }

Rational pow2(long k) {
  Rational r(1);
  if (k >= 0) {
    mpz_ui_pow_ui(mpq_numref(r.get_mpq_t()), 2, static_cast<unsigned long>(k));
  } else {
    mpz_ui_pow_ui(mpq_denref(r.get_mpq_t()), 2, static_cast<unsigned long>(-k));
  }
  return r;
}

RunningSum::RunningSum() : num_(0), den_(1) {}

void RunningSum::reset() {
  num_ = 0;
  den_ = 1;
}

void RunningSum::add(const Rational& t) {
  const mpz_srcptr tn = mpq_numref(t.get_mpq_t());
  const mpz_srcptr td = mpq_denref(t.get_mpq_t());
  if (mpz_sgn(tn) == 0) return;
  if (!mpz_divisible_p(den_.get_mpz_t(), td)) {
    // Grow den_ to a common denominator: den_ *= td / gcd(den_, td).
    mpz_gcd(t1_.get_mpz_t(), den_.get_mpz_t(), td);
    mpz_divexact(t2_.get_mpz_t(), td, t1_.get_mpz_t());
    mpz_mul(num_.get_mpz_t(), num_.get_mpz_t(), t2_.get_mpz_t());
    mpz_mul(den_.get_mpz_t(), den_.get_mpz_t(), t2_.get_mpz_t());
  }
  mpz_divexact(t1_.get_mpz_t(), den_.get_mpz_t(), td);
  mpz_addmul(num_.get_mpz_t(), tn, t1_.get_mpz_t());
}

void RunningSum::subtract(const Rational& t) {
  Rational neg;
  mpq_neg(neg.get_mpq_t(), t.get_mpq_t());
  add(neg);
}

int RunningSum::compare(const Rational& x) const {
  // sign(num/den - xn/xd) = sign(num*xd - den*xn), den > 0, xd > 0.
  mpz_mul(t1_.get_mpz_t(), num_.get_mpz_t(), mpq_denref(x.get_mpq_t()));
  mpz_mul(t2_.get_mpz_t(), den_.get_mpz_t(), mpq_numref(x.get_mpq_t()));
  return mpz_cmp(t1_.get_mpz_t(), t2_.get_mpz_t());
}

bool RunningSum::abs_diff_le(const Rational& x, const Rational& bound) const {
  // |num*xd - den*xn| * bd <= |bn| * den * xd
  mpz_mul(t1_.get_mpz_t(), num_.get_mpz_t(), mpq_denref(x.get_mpq_t()));
  mpz_mul(t2_.get_mpz_t(), den_.get_mpz_t(), mpq_numref(x.get_mpq_t()));
  mpz_sub(t1_.get_mpz_t(), t1_.get_mpz_t(), t2_.get_mpz_t());
  mpz_abs(t1_.get_mpz_t(), t1_.get_mpz_t());
  mpz_mul(t1_.get_mpz_t(), t1_.get_mpz_t(), mpq_denref(bound.get_mpq_t()));
  mpz_mul(t2_.get_mpz_t(), den_.get_mpz_t(), mpq_denref(x.get_mpq_t()));
  mpz_abs(t3_.get_mpz_t(), mpq_numref(bound.get_mpq_t()));
  mpz_mul(t2_.get_mpz_t(), t2_.get_mpz_t(), t3_.get_mpz_t());
  return mpz_cmp(t1_.get_mpz_t(), t2_.get_mpz_t()) <= 0;
}

bool RunningSum::abs_gt(const Rational& bound) const {
  // |num| * bd > |bn| * den
  mpz_abs(t1_.get_mpz_t(), num_.get_mpz_t());
  mpz_mul(t1_.get_mpz_t(), t1_.get_mpz_t(), mpq_denref(bound.get_mpq_t()));
  mpz_abs(t2_.get_mpz_t(), mpq_numref(bound.get_mpq_t()));
  mpz_mul(t2_.get_mpz_t(), t2_.get_mpz_t(), den_.get_mpz_t());
  return mpz_cmp(t1_.get_mpz_t(), t2_.get_mpz_t()) > 0;
}

Rational RunningSum::round_up(long grid) const {
  // ceil(value * grid) / grid
  mpz_mul_si(t1_.get_mpz_t(), num_.get_mpz_t(), grid);
  mpz_cdiv_q(t2_.get_mpz_t(), t1_.get_mpz_t(), den_.get_mpz_t());
  return make_rational(BigInt(t2_), BigInt(grid));
}

Rational RunningSum::value() const {
  return make_rational(num_, den_);
}

}  // namespace serex
