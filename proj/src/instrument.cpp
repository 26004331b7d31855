#include "serex/instrument.hpp"

#include <algorithm>
#include <map>

namespace serex {

PlusTailPredicate::PlusTailPredicate(TermStream series, Rational eps)
    : series_(std::move(series)), eps_(std::move(eps)) {
  if (sign(eps_) <= 0) throw spec_error("plus-tail predicate needs eps > 0");
}

Rational PlusTailPredicate::plus_term(Index i) const {
  Rational t = series_.term(i);
  return sign(t) > 0 ? t : Rational();
}

Rational PlusTailPredicate::plus_window(Index n, Index m) const {
  RunningSum acc;
  for (Index i = n + 1; i <= m; ++i) acc.add(plus_term(i));
  return acc.value();
}

int PlusTailPredicate::phi(Index m, Index n) const {
  if (m < 1 || n < 1) throw spec_error("phi needs positive indices");
  if (m <= n) return 1;
  RunningSum acc;
  for (Index i = n + 1; i <= m; ++i) acc.add(plus_term(i));
  return acc.compare(eps_) >= 0 ? 0 : 1;
}

SMembership kappa(const PlusTailPredicate& p, Index n, Index fuel) {
  if (n < 1) throw spec_error("kappa needs n >= 1");
  if (fuel < 1) throw spec_error("kappa needs fuel >= 1");
  RunningSum acc;
  for (Index m = n + 1; m <= n + fuel; ++m) {
    acc.add(p.plus_term(m));
    if (acc.compare(p.eps()) >= 0) return SMembership::member(m);
  }
  return SMembership::unknown(n + fuel);
}

struct LambdaStream::State {
  PlusTailPredicate p;
  std::function<SSeqEntry(Index)> s_seq;

  std::vector<signed char> bits;  // bits[i] = lambda_{i+1}
  Index last_s_value = 0;         // monotonicity check over consumed entries
  Index run_lo = 0;               // open run start, 0 when none
  Index run_close = 0;            // kappa(run_lo) for the open run
  std::map<Index, Index> run_witnesses;   // run start -> membership witness
  std::map<Index, Index> run_starts;      // position -> start of its run

  State(PlusTailPredicate p_, std::function<SSeqEntry(Index)> s_)
      : p(std::move(p_)), s_seq(std::move(s_)) {}

  SSeqEntry consume(Index n) {
    SSeqEntry e = s_seq(n);
    if (e.value < 1) throw spec_error("s-sequence value must be a positive integer");
    if (n == 1 && e.value != 1) {
      throw spec_error("s-sequence must start at s_1 = 1, got " + std::to_string(e.value));
    }
    if (e.value < last_s_value) {
      throw spec_error("s-sequence must be nondecreasing; s_" + std::to_string(n) + " = " +
                       std::to_string(e.value) + " after " + std::to_string(last_s_value));
    }
    last_s_value = e.value;
    return e;
  }

  void ensure(Index n) {
    if (static_cast<Index>(bits.size()) == 0) {
      consume(1);       // validates s_1 = 1
      bits.push_back(0);  // lambda_1 = 0
    }
    while (static_cast<Index>(bits.size()) < n) {
      const Index pos = static_cast<Index>(bits.size());  // lambda_pos known; decide lambda_{pos+1}
      if (bits[static_cast<std::size_t>(pos - 1)] == 0) {
        const SSeqEntry e = consume(pos + 1);
        if (e.value <= pos + 1) {
          bits.push_back(0);
        } else {
          // Run opens at pos+1. Its membership witness is inherited from
          // s_{pos+1}: the certified window for the larger value contains
          // the window for pos+1, since plus-terms are nonnegative.
          if (e.witness < 1 || p.phi(e.witness, e.value) != 0) {
            throw membership_violation("witness m = " + std::to_string(e.witness) + " for s = " +
                                       std::to_string(e.value) + " fails phi(m, s) = 0");
          }
          const Index lo = pos + 1;
          const SMembership close = kappa(p, lo, e.witness - lo);
          if (!close.is_member()) {
            throw invariant_violation("kappa(" + std::to_string(lo) +
                                      ") not found below its inherited witness");
          }
          run_lo = lo;
          run_close = close.value;
          run_witnesses[lo] = e.witness;
          bits.push_back(1);
          run_starts[lo] = lo;
        }
      } else {
        // Inside the run [run_lo, ...]: it closes right after kappa(run_lo).
        if (pos == run_close) {
          bits.push_back(0);
          run_lo = 0;
          run_close = 0;
        } else {
          bits.push_back(1);
          run_starts[pos + 1] = run_lo;
        }
      }
    }
  }
};

LambdaStream lambda_stream(const PlusTailPredicate& p, std::function<SSeqEntry(Index)> s_seq) {
  if (!s_seq) throw spec_error("lambda stream requires an s-sequence");
  return LambdaStream(std::make_shared<LambdaStream::State>(p, std::move(s_seq)));
}

void LambdaStream::ensure(Index n) const {
  if (n < 1) throw spec_error("lambda index must be >= 1");
  st_->ensure(n);
}

int LambdaStream::bit(Index n) const {
  ensure(n);
  return st_->bits[static_cast<std::size_t>(n - 1)];
}

Index LambdaStream::run_start(Index n) const {
  if (bit(n) == 0) return 0;
  return st_->run_starts.at(n);
}

Index LambdaStream::run_witness(Index lo) const {
  auto it = st_->run_witnesses.find(lo);
  if (it == st_->run_witnesses.end()) throw spec_error("no run starts at " + std::to_string(lo));
  return it->second;
}

std::vector<BadInterval> bad_intervals(const LambdaStream& ls, Index upto) {
  if (upto < 0) throw spec_error("bad_intervals needs upto >= 0");
  std::vector<BadInterval> out;
  if (upto == 0) return out;
  ls.ensure(upto + 1);
  Index lo = 0;
  for (Index n = 1; n <= upto + 1; ++n) {
    const int b = n <= upto ? ls.bit(n) : ls.bit(upto + 1);
    if (b == 1 && lo == 0) lo = n;
    if (b == 0 && lo != 0) {
      if (n - 1 <= upto) out.push_back({lo, n - 1});
      lo = 0;
    }
  }
  // A run still open at upto+1 has no observed closing 0 and is dropped.
  return out;
}

namespace {

struct SigmaIntervals {
  std::vector<BadInterval> ivs;  // sorted, disjoint
  TermStream a;
  std::map<std::size_t, std::vector<Index>> arranged;

  SigmaIntervals(std::vector<BadInterval> ivs_, TermStream a_) : ivs(std::move(ivs_)), a(std::move(a_)) {}

  // index of the interval containing n, or npos
  std::size_t find(Index n) const {
    std::size_t lo = 0, hi = ivs.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (ivs[mid].hi < n) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo < ivs.size() && ivs[lo].lo <= n && n <= ivs[lo].hi) return lo;
    return static_cast<std::size_t>(-1);
  }

  const std::vector<Index>& arrangement(std::size_t idx) {
    auto it = arranged.find(idx);
    if (it != arranged.end()) return it->second;
    const BadInterval& iv = ivs[idx];
    std::vector<Index> vals;
    vals.reserve(static_cast<std::size_t>(iv.hi - iv.lo + 1));
    for (Index i = iv.lo; i <= iv.hi; ++i) {
      if (sign(a.term(i)) > 0) vals.push_back(i);
    }
    for (Index i = iv.lo; i <= iv.hi; ++i) {
      if (sign(a.term(i)) <= 0) vals.push_back(i);
    }
    return arranged.emplace(idx, std::move(vals)).first->second;
  }
};

}  // namespace

Permutation sigma_from_lambda(const TermStream& a, std::vector<BadInterval> intervals) {
  for (const BadInterval& iv : intervals) {
    if (iv.lo < 1 || iv.hi < iv.lo) {
      throw spec_error("bad interval [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + "]");
    }
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const BadInterval& x, const BadInterval& y) { return x.lo < y.lo; });
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].lo <= intervals[i - 1].hi) {
      throw invariant_violation("overlapping intervals [" + std::to_string(intervals[i - 1].lo) + ", " +
                                std::to_string(intervals[i - 1].hi) + "] and [" +
                                std::to_string(intervals[i].lo) + ", " + std::to_string(intervals[i].hi) +
                                "]");
    }
  }
  auto st = std::make_shared<SigmaIntervals>(std::move(intervals), a);
  auto img = [st](Index n) {
    const std::size_t idx = st->find(n);
    if (idx == static_cast<std::size_t>(-1)) return n;
    const BadInterval& iv = st->ivs[idx];
    return st->arrangement(idx)[static_cast<std::size_t>(n - iv.lo)];
  };
  auto cov = [st](Index n) {
    const std::size_t idx = st->find(n);
    return idx == static_cast<std::size_t>(-1) ? n : std::max(n, st->ivs[idx].hi);
  };
  return Permutation(img, cov, cov);
}

std::pair<Index, Index> verify_sig1(const TermStream& a, const Permutation& sigma,
                                    const BadInterval& iv, const Rational& eps) {
  if (sign(eps) <= 0) throw spec_error("verify_sig1 needs eps > 0");
  if (iv.lo < 1 || iv.hi < iv.lo) throw spec_error("verify_sig1 got an empty interval");
  for (const Index j : {iv.lo, iv.lo - 1}) {
    if (j < 0) continue;
    RunningSum acc;
    for (Index k = j + 1; k <= iv.hi; ++k) {
      acc.add(a.term(sigma.image(k)));
      if (acc.compare(eps) >= 0) return {j, k};
    }
  }
  throw invariant_violation("not-found: no block within [" + std::to_string(iv.lo) + ", " +
                            std::to_string(iv.hi) + "] reaches eps = " + to_string(eps));
}

Rationalized rationalize(RealOracle oracle) {
  if (!oracle) throw spec_error("rationalize requires an oracle");
  TermStream terms([oracle](Index i) {
    const Rational prec = pow2(-(static_cast<long>(i) + 2));
    const Rational q = oracle(i, prec);
    const Rational upper = q + prec;  // >= a_i
    // Least multiple of 2^{-(i+2)} strictly above `upper`: the output then
    // sits in (a_i, a_i + 3*2^{-(i+2)}), so 0 < b_i < 2^{-i}.
    const Rational scaled = upper / prec;
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), mpq_numref(scaled.get_mpq_t()), mpq_denref(scaled.get_mpq_t()));
    fl += 1;
    return Rational(make_rational(fl, 1) * prec);
  });
  auto bounds = [oracle, terms](Index i, const Rational& eta) {
    if (sign(eta) <= 0) throw spec_error("shift bounds need eta > 0");
    const Rational q = oracle(i, eta);
    const Rational r = terms.term(i);
    return std::make_pair(Rational(r - q - eta), Rational(r - q + eta));
  };
  return {std::move(terms), std::move(bounds)};
}

TailCheck tail_bound_check(const PlusTailPredicate& p, Index n_floor, Index n, Index m) {
  if (n_floor < 1 || n < n_floor || m <= n) {
    throw spec_error("tail_bound_check needs m > n >= N >= 1");
  }
  Rational sum = p.plus_window(n, m);
  return {sum <= p.eps(), std::move(sum)};
}

}  // namespace serex
