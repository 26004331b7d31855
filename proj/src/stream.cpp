#include "serex/stream.hpp"

namespace serex {

TermStream::TermStream(Fn fn, Index memo_cap) : st_(std::make_shared<State>()) {
  if (!fn) throw spec_error("term stream requires a term function");
  st_->fn = std::move(fn);
  st_->cap = memo_cap;
}

Rational TermStream::term(Index n) const {
  if (n < 1) throw spec_error("stream index must be >= 1");
  State& st = *st_;
  if (n > st.cap) return st.fn(n);
  const auto i = static_cast<std::size_t>(n - 1);
  if (i >= st.present.size()) {
    st.present.resize(std::max<std::size_t>(i + 1, st.present.size() * 2));
    st.vals.resize(st.present.size());
  }
  if (!st.present[i]) {
    st.vals[i] = st.fn(n);
    st.present[i] = 1;
  }
  return st.vals[i];
}

Rational partial_sum(const TermStream& s, Index n) {
  if (n < 0) throw spec_error("partial_sum needs n >= 0");
  RunningSum acc;
  for (Index i = 1; i <= n; ++i) acc.add(s.term(i));
  return acc.value();
}

Rational window_sum(const TermStream& s, Index m, Index m2) {
  if (m < 1) throw spec_error("window_sum needs m >= 1");
  RunningSum acc;
  for (Index i = m; i <= m2; ++i) acc.add(s.term(i));
  return acc.value();
}

CauchyModulus::CauchyModulus(Fn fn) : fn_(std::move(fn)) {
  if (!fn_) throw spec_error("Cauchy modulus requires a bound function");
}

Index CauchyModulus::at(const Rational& eps) const {
  if (sign(eps) <= 0) throw spec_error("Cauchy modulus queried at eps <= 0");
  Index n = fn_(eps);
  return n < 1 ? 1 : n;
}

Rational limit_approx(const ConvergentSeries& cs, const Rational& eps) {
  return partial_sum(cs.terms, cs.modulus.at(eps));
}

}  // namespace serex
