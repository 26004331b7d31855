#include "serex/bdn.hpp"

#include <algorithm>

namespace serex {

namespace {
constexpr Index kLambdaCap = 22;  // lambda_bit realizes enumerations up to 2^{k+1}

Index clog2_ge(Index x) {  // smallest j with 2^j >= x
  Index j = 0;
  while ((Index{1} << j) < x) ++j;
  return j;
}
}  // namespace

IntStream::IntStream(Fn fn, Index memo_cap) : st_(std::make_shared<State>()) {
  if (!fn) throw spec_error("integer stream requires a function");
  st_->fn = std::move(fn);
  st_->cap = memo_cap;
}

Index IntStream::at(Index n) const {
  if (n < 1) throw spec_error("integer stream index must be >= 1");
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

PseudoboundedSet make_set(IntStream::Fn enumerate, PbOracle oracle) {
  if (!oracle) throw spec_error("pseudobounded set requires a pb_modulus oracle");
  return {IntStream(std::move(enumerate)), std::move(oracle)};
}

PseudoboundedSet make_finite_sup_set(std::vector<Index> values) {
  if (values.empty()) throw spec_error("set must be inhabited");
  for (Index v : values) {
    if (v < 1) throw spec_error("set elements must be positive integers");
  }
  const Index bound = *std::max_element(values.begin(), values.end());
  auto vals = std::make_shared<std::vector<Index>>(std::move(values));
  // Every sequence through a set bounded by B satisfies seq(n) <= B < n
  // from n = B + 1 on; the oracle never needs to look at the sequence.
  return make_set(
      [vals](Index n) {
        return n <= static_cast<Index>(vals->size()) ? (*vals)[static_cast<std::size_t>(n - 1)]
                                                     : vals->back();
      },
      [bound](const std::function<Index(Index)>&) { return bound + 1; });
}

PseudoboundedSet make_custom_set(std::vector<Index> prefix) { return make_finite_sup_set(std::move(prefix)); }

PseudoboundedSet make_identity_set() {
  // Not pseudobounded: the enumeration itself is a sequence with
  // seq(n) = n, never below its index. The oracle lies deliberately so
  // the downstream constructions can demonstrate certificate falsification.
  return make_set([](Index n) { return n; },
                  [](const std::function<Index(Index)>&) { return Index{1}; });
}

PseudoboundedSet monotone_closure(const PseudoboundedSet& set) {
  auto src = set.enumerate;
  auto cache = std::make_shared<std::vector<Index>>();
  IntStream closed([src, cache](Index n) {
    while (static_cast<Index>(cache->size()) < n) {
      Index next = src.at(static_cast<Index>(cache->size()) + 1);
      if (!cache->empty()) next = std::max(next, cache->back());
      cache->push_back(next);
    }
    return (*cache)[static_cast<std::size_t>(n - 1)];
  });
  // Closure values are elements of the original enumeration, so the same
  // oracle covers sequences through the closure.
  return {std::move(closed), set.pb_modulus};
}

int lambda_bit(const PseudoboundedSet& set, Index k) {
  if (k < 1) throw spec_error("lambda_bit needs k >= 1");
  if (k > kLambdaCap) throw spec_error("lambda_bit beyond desk scale: k = " + std::to_string(k));
  return set.enumerate.at(Index{2} << k) > set.enumerate.at(Index{1} << k) ? 1 : 0;
}

LambdaSeq lambda_seq(const PseudoboundedSet& set) {
  PseudoboundedSet s = set;
  return {[s](Index k) { return lambda_bit(s, k); }};
}

Rational bdn_magnitude(const PseudoboundedSet& set, Index n) {
  if (n < 1) throw spec_error("bdn term index must be >= 1");
  if (n <= 2) return Rational();
  Index k = 1;
  while ((Index{2} << k) < n) ++k;  // 2^k < n <= 2^{k+1}
  if (lambda_bit(set, k) == 0) return Rational();
  return make_rational(1, static_cast<long>(n));
}

Rational bdn_term(const PseudoboundedSet& set, Index n) {
  Rational m = bdn_magnitude(set, n);
  if (n % 2 == 1) mpq_neg(m.get_mpq_t(), m.get_mpq_t());
  return m;
}

Rational bdn_cauchy_bound(Index k) {
  if (k < 1) throw spec_error("bdn_cauchy_bound needs k >= 1");
  return pow2(static_cast<long>(1 - k));
}

BdnSeries bdn_series(const PseudoboundedSet& set) {
  PseudoboundedSet s = set;
  TermStream magnitudes([s](Index n) { return bdn_magnitude(s, n); });
  TermStream signed_terms([s](Index n) { return bdn_term(s, n); });
  // Windows starting past 2^k are bounded by 2^{-(k-1)} regardless of the
  // lambda bits: at most 2^{-k} from the first partial dyadic block,
  // 2^{-nu} from each later block nu, summing below 2^{-(k-1)}.
  CauchyModulus mod([](const Rational& eps) {
    Index k = 1;
    while (bdn_cauchy_bound(k) > eps) {
      ++k;
      if (k > 62) throw spec_error("bdn modulus out of range for eps " + to_string(eps));
    }
    return (Index{1} << k) + 1;
  });
  return {std::move(magnitudes), std::move(signed_terms), std::move(mod)};
}

struct WeakBracketing::State {
  PseudoboundedSet set;  // monotone-closed
  Permutation sigma;
  BdnSeries series;
  TermStream rearranged;

  std::vector<Index> j_seq, n_seq;  // realized pairs, 1-based
  std::vector<Index> selected;      // k_1 < k_2 < ...

  Index scan_pos = 0;  // sigma image_sup fallback
  Index scan_max = 0;

  State(PseudoboundedSet set_, Permutation sigma_)
      : set(std::move(set_)),
        sigma(std::move(sigma_)),
        series(bdn_series(set)),
        rearranged(apply_permutation(series.signed_terms, sigma)) {}

  Index sup_image_upto(Index p) {
    if (sigma.has_image_sup()) return sigma.image_sup(p);
    while (scan_pos < p) {
      ++scan_pos;
      scan_max = std::max(scan_max, sigma.image_raw(scan_pos));
    }
    return scan_max;
  }

  void ensure_jn(Index k) {
    while (static_cast<Index>(j_seq.size()) < k) {
      const Index kk = static_cast<Index>(j_seq.size()) + 1;
      Index j;
      if (kk == 1) {
        j = 2;
      } else {
        const Index n_prev = n_seq.back();
        // (a) n_{k-1} < 2^{j_k}; (b) sigma([1..n_{k-1}]) within 2^{j_k}-1.
        j = std::max(j_seq.back() + 1,
                     std::max(clog2_ge(n_prev + 1), clog2_ge(sup_image_upto(n_prev) + 1)));
      }
      if (j > 40) throw spec_error("weak bracketing exponent beyond desk scale");
      // (a) 2^{j_k} < n_k; (b) {1..2^{j_k}} within sigma([1..n_k]).
      const Index n = std::max((Index{1} << j) + 1, sigma.coverage(Index{1} << j));
      j_seq.push_back(j);
      n_seq.push_back(n);
    }
  }

  bool window_all_zero(Index k) {
    ensure_jn(k + 1);
    for (Index i = j_seq[static_cast<std::size_t>(k - 1)]; i < j_seq[static_cast<std::size_t>(k)]; ++i) {
      if (lambda_bit(set, i) == 1) return false;
    }
    return true;
  }

  void ensure_selected(Index count) {
    while (static_cast<Index>(selected.size()) < count) {
      const Index base = selected.empty() ? 0 : selected.back();
      // The tail (s_{2^{j_{base+kappa+1}}})_{kappa>=1} runs through S;
      // the oracle bounds it below its index from K on, so some window
      // [j_{base+kappa}, j_{base+kappa+1}) with kappa <= K must be all
      // zero or the oracle's answer is falsified.
      auto seq = [this, base](Index kappa) {
        ensure_jn(base + kappa + 1);
        const Index j = j_seq[static_cast<std::size_t>(base + kappa)];
        if (j > kLambdaCap + 1) throw spec_error("pb sequence beyond desk scale");
        return set.enumerate.at(Index{1} << j);
      };
      const Index cap = set.pb_modulus(seq);
      if (cap < 1) throw pseudoboundedness_violation("oracle returned a nonpositive bound");
      Index found = 0;
      for (Index kappa = 1; kappa <= cap; ++kappa) {
        if (window_all_zero(base + kappa)) {
          found = base + kappa;
          break;
        }
      }
      if (found == 0) {
        throw pseudoboundedness_violation(
            "no all-zero lambda window below the modulus answer K = " + std::to_string(cap) +
            " (certificate falsified)");
      }
      selected.push_back(found);
    }
  }

  Index block_boundary(Index i) {  // f(i) for the induced bracketing
    if (i == 1) return 1;
    ensure_selected(i - 1);
    return n_seq[static_cast<std::size_t>(selected[static_cast<std::size_t>(i - 2)] - 1)] + 1;
  }
};

WeakBracketing weak_bracketing(const PseudoboundedSet& set, const Permutation& sigma) {
  auto st = std::make_shared<WeakBracketing::State>(set, sigma);
  st->ensure_jn(2);
  return WeakBracketing(std::move(st));
}

Index WeakBracketing::j_at(Index k) const {
  if (k < 1) throw spec_error("j index must be >= 1");
  st_->ensure_jn(k);
  return st_->j_seq[static_cast<std::size_t>(k - 1)];
}

Index WeakBracketing::n_at(Index k) const {
  if (k < 1) throw spec_error("n index must be >= 1");
  st_->ensure_jn(k);
  return st_->n_seq[static_cast<std::size_t>(k - 1)];
}

Index WeakBracketing::selected_k(Index i) const {
  if (i < 1) throw spec_error("selected index must be >= 1");
  st_->ensure_selected(i);
  return st_->selected[static_cast<std::size_t>(i - 1)];
}

Rational WeakBracketing::selected_block_sum(Index i) const {
  const Index k_i = selected_k(i);
  const Index k_next = selected_k(i + 1);
  const Index lo = st_->n_seq[static_cast<std::size_t>(k_i - 1)] + 1;
  const Index hi = st_->n_seq[static_cast<std::size_t>(k_next - 1)];
  RunningSum acc;
  for (Index p = lo; p <= hi; ++p) acc.add(st_->rearranged.term(p));
  Rational sum = acc.value();
  const Rational bound = pow2(static_cast<long>(-k_i));
  if (!(abs(sum) < bound)) {
    throw invariant_violation("weak bracketing block " + std::to_string(i) + " has |sum| = " +
                              to_string(abs(sum)) + " >= 2^-k_i = " + to_string(bound));
  }
  return sum;
}

Bracketing WeakBracketing::blocks() const {
  auto st = st_;
  return bracket_series(st->rearranged, IndexMap([st](Index i) { return st->block_boundary(i); }));
}

CauchyModulus WeakBracketing::block_modulus() const {
  // Realized block i is below 2^{-k_i} with k_i strictly increasing, so
  // block windows from block index b onward are below sum_{i>=b-1} 2^{-k_i}
  // <= 2^{-(b-2)}; the first block is unconstrained, hence the +2.
  auto st = st_;
  return CauchyModulus([st](const Rational& eps) {
    Index b = 2;
    while (pow2(static_cast<long>(-(b - 2))) > eps) {
      ++b;
      if (b > 62) throw spec_error("weak bracketing modulus out of range");
    }
    return b + 1;
  });
}

Index bounded_from_convergence(const PseudoboundedSet& set, Index n_exp, Index range) {
  if (n_exp < 1) throw spec_error("bounded_from_convergence needs N >= 1");
  if (range < 0) throw spec_error("verification range must be >= 0");
  // Tail certificate: lambda_k = 0 throughout (N, N+range]. A single 1-bit
  // puts mass > 1/2 into the tail past 2^N and falsifies the hypothesis.
  for (Index k = n_exp + 1; k <= n_exp + range; ++k) {
    if (lambda_bit(set, k) == 1) {
      throw tail_violation("lambda_" + std::to_string(k) + " = 1: tail past 2^" +
                           std::to_string(n_exp) + " carries mass > 1/2");
    }
  }
  const Index bound = set.enumerate.at(Index{1} << n_exp);
  // Sampled domination: s_n <= s_{2^N} on dyadic points through the
  // verification range (catches lambda_N = 1, which the range above
  // deliberately does not cover).
  const Index top = std::min<Index>(n_exp + range, kLambdaCap) + 1;
  for (Index e = 0; e <= top; ++e) {
    const Index n = Index{1} << e;
    const Index s_n = set.enumerate.at(n);
    if (s_n > bound) {
      throw tail_violation("s_" + std::to_string(n) + " = " + std::to_string(s_n) +
                           " exceeds the claimed bound s_{2^N} = " + std::to_string(bound));
    }
  }
  return bound;
}

}  // namespace serex
