#include "serex/oscillate.hpp"

#include <algorithm>
#include <map>

#include "serex/permutation.hpp"

namespace serex {

namespace {
// Checkpoints whose f(k) stays below this cap get their defining
// inequality verified by exact summation; structurally selected
// checkpoints beyond it rely on the certificates alone (the exact block
// checks still run whenever a block is realized).
constexpr Index kExactCap = 20000;
constexpr int kSearchAttempts = 256;
}  // namespace

struct OscillationWitness::State {
  ConvergentSeries a;
  Permutation sigma;
  BracketedSeries br;
  TermStream rearranged;  // a o sigma
  Rational delta, eps, budget;
  Side side = Side::s_below_t;
  Rational s_hat, t_hat;

  struct Checkpoint {
    Index k = 0;
    Index f_k = 0;
    bool sigma_side = false;
    Index sup = 0;       // bound on tau-image over positions [1..f_k]
    Index cum_sup = 0;   // running max of sup over checkpoints so far
    bool verified = false;
  };
  std::vector<Checkpoint> cps;

  // sigma prefix scan fallback when sigma carries no image_sup certificate
  Index scan_pos = 0;
  Index scan_max = 0;

  std::map<Index, std::vector<Index>> segments;  // i -> tau values on (f(k_{i-1}), f(k_i)]
  std::map<Index, Rational> cp_partial;          // i -> exact tau-partial sum at f(k_i)

  State(ConvergentSeries a_, Permutation sigma_, BracketedSeries br_, Rational delta_, Side side_)
      : a(std::move(a_)),
        sigma(std::move(sigma_)),
        br(std::move(br_)),
        rearranged(apply_permutation(a.terms, sigma)),
        delta(std::move(delta_)),
        side(side_) {}

  Index sup_image_upto(Index p) {
    if (sigma.has_image_sup()) return sigma.image_sup(p);
    while (scan_pos < p) {
      ++scan_pos;
      scan_max = std::max(scan_max, sigma.image_raw(scan_pos));
    }
    return scan_max;
  }

  // Exact checkpoint inequalities, with the limit approximations standing
  // in for s and t: identity checkpoints sit on the s side of the gap,
  // sigma checkpoints on the t side, each with margin eps - budget.
  bool identity_checkpoint_ok(Index f_k) {
    RunningSum acc;
    for (Index n = 1; n <= f_k; ++n) acc.add(a.terms.term(n));
    const Rational margin = eps - budget;
    if (side == Side::s_below_t) return acc.compare(s_hat + margin) <= 0;
    return acc.compare(s_hat - margin) >= 0;
  }
  bool sigma_checkpoint_ok(Index f_k) {
    RunningSum acc;
    for (Index n = 1; n <= f_k; ++n) acc.add(rearranged.term(n));
    const Rational margin = eps - budget;
    if (side == Side::s_below_t) return acc.compare(t_hat - margin) >= 0;
    return acc.compare(t_hat + margin) <= 0;
  }

  void push_checkpoint(Index k, bool sigma_side) {
    Checkpoint cp;
    cp.k = k;
    cp.f_k = br.brackets.f.at(k);
    cp.sigma_side = sigma_side;
    cp.sup = sigma_side ? sup_image_upto(cp.f_k) : cp.f_k;
    cp.cum_sup = cps.empty() ? cp.sup : std::max(cp.sup, cps.back().cum_sup);
    cp.verified = false;
    cps.push_back(cp);
  }

  void ensure_checkpoints(Index count) {
    while (static_cast<Index>(cps.size()) < count) {
      if (cps.empty()) {
        // k_1: windows of the base series past f(k_1) stay below eps/2,
        // and the identity partial sum at f(k_1) lands below s + eps.
        const Index need = a.modulus.at(eps / 2);
        Index k = index_map_lower_bound(br.brackets.f, need, 1);
        int tries = 0;
        while (br.brackets.f.at(k) <= kExactCap && !identity_checkpoint_ok(br.brackets.f.at(k))) {
          if (++tries > kSearchAttempts) {
            throw modulus_violation("identity checkpoint refused to settle near s_hat = " +
                                    to_string(s_hat));
          }
          ++k;
        }
        push_checkpoint(k, false);
        cps.back().verified = br.brackets.f.at(k) <= kExactCap;
        continue;
      }
      const Checkpoint& prev = cps.back();
      if (!prev.sigma_side) {
        // sigma-side checkpoint: sigma's prefix must cover the identity
        // prefix used so far, and the bracketed partial sums must have
        // settled near t (candidate from the block modulus, then exact).
        const Index cov = sigma.coverage(prev.f_k);
        const Index kb = br.block_modulus.at(budget) + 1;
        Index k = std::max(index_map_lower_bound(br.brackets.f, cov, prev.k + 1), kb);
        int tries = 0;
        while (br.brackets.f.at(k) <= kExactCap && !sigma_checkpoint_ok(br.brackets.f.at(k))) {
          if (++tries > kSearchAttempts) {
            throw modulus_violation("sigma checkpoint refused to settle near t_hat = " +
                                    to_string(t_hat));
          }
          ++k;
        }
        push_checkpoint(k, true);
        cps.back().verified = br.brackets.f.at(k) <= kExactCap;
      } else {
        // identity-side checkpoint: swallow every index sigma has emitted
        // so far, with base windows past f(k) again below eps/2.
        const Index floor_f = std::max(prev.sup, a.modulus.at(eps / 2));
        Index k = index_map_lower_bound(br.brackets.f, floor_f, prev.k + 1);
        int tries = 0;
        while (br.brackets.f.at(k) <= kExactCap && !identity_checkpoint_ok(br.brackets.f.at(k))) {
          if (++tries > kSearchAttempts) {
            throw modulus_violation("identity checkpoint refused to settle near s_hat = " +
                                    to_string(s_hat));
          }
          ++k;
        }
        push_checkpoint(k, false);
        cps.back().verified = br.brackets.f.at(k) <= kExactCap;
      }
    }
  }

  const Rational& checkpoint_partial(Index i) {
    ensure_checkpoints(i);
    auto it = cp_partial.find(i);
    if (it != cp_partial.end()) return it->second;
    const Checkpoint& cp = cps[static_cast<std::size_t>(i - 1)];
    const Rational p =
        cp.sigma_side ? partial_sum(rearranged, cp.f_k) : partial_sum(a.terms, cp.f_k);
    return cp_partial.emplace(i, p).first->second;
  }

  // tau values on positions (f(k_{i-1}), f(k_i)], with f(k_0) = 0.
  const std::vector<Index>& segment(Index i) {
    ensure_checkpoints(i);
    auto it = segments.find(i);
    if (it != segments.end()) return it->second;
    const Checkpoint& cp = cps[static_cast<std::size_t>(i - 1)];
    const Index lo = i == 1 ? 0 : cps[static_cast<std::size_t>(i - 2)].f_k;
    std::vector<Index> seg;
    seg.reserve(static_cast<std::size_t>(cp.f_k - lo));
    if (!cp.sigma_side) {
      // {1..f(k_i)} minus the sigma prefix image at the previous
      // checkpoint (empty for i = 1), ascending.
      std::vector<char> taken(static_cast<std::size_t>(cp.f_k) + 1, 0);
      if (i > 1) {
        for (Index m = 1; m <= lo; ++m) {
          const Index v = sigma.image(m);
          if (v > cp.f_k) {
            throw certificate_violation("image_sup bound lied: sigma(" + std::to_string(m) + ") = " +
                                        std::to_string(v) + " exceeds f(k_i) = " + std::to_string(cp.f_k));
          }
          taken[static_cast<std::size_t>(v)] = 1;
        }
      }
      for (Index v = 1; v <= cp.f_k; ++v) {
        if (!taken[static_cast<std::size_t>(v)]) seg.push_back(v);
      }
    } else {
      // {sigma(m) : m <= f(k_i), sigma(m) > f(k_{i-1})} in sigma order;
      // the previous identity checkpoint consumed exactly {1..f(k_{i-1})}.
      for (Index m = 1; m <= cp.f_k; ++m) {
        const Index v = sigma.image(m);
        if (v > lo) seg.push_back(v);
      }
    }
    if (static_cast<Index>(seg.size()) != cp.f_k - lo) {
      throw certificate_violation("coverage certificate lied: segment " + std::to_string(i) + " has " +
                                  std::to_string(seg.size()) + " values for " +
                                  std::to_string(cp.f_k - lo) + " positions");
    }
    return segments.emplace(i, std::move(seg)).first->second;
  }

  Index tau_image(Index n) {
    ensure_checkpoints(1);
    Index i = 1;
    while (cps[static_cast<std::size_t>(i - 1)].f_k < n) {
      ensure_checkpoints(i + 1);
      ++i;
    }
    const Index lo = i == 1 ? 0 : cps[static_cast<std::size_t>(i - 2)].f_k;
    return segment(i)[static_cast<std::size_t>(n - lo - 1)];
  }

  Index tau_coverage(Index n) {
    ensure_checkpoints(1);
    Index i = 1;
    while (cps[static_cast<std::size_t>(i - 1)].sigma_side ||
           cps[static_cast<std::size_t>(i - 1)].f_k < n) {
      ensure_checkpoints(i + 1);
      ++i;
    }
    return cps[static_cast<std::size_t>(i - 1)].f_k;  // identity checkpoint covers {1..f}
  }

  Index tau_sup(Index p) {
    ensure_checkpoints(1);
    Index i = 1;
    while (cps[static_cast<std::size_t>(i - 1)].f_k < p) {
      ensure_checkpoints(i + 1);
      ++i;
    }
    return cps[static_cast<std::size_t>(i - 1)].cum_sup;
  }
};

OscillationWitness build_oscillation(const ConvergentSeries& a, const Permutation& sigma,
                                     const BracketedSeries& br, const Rational& delta, Side side) {
  if (sign(delta) <= 0) throw spec_error("oscillation needs delta > 0");
  auto st = std::make_shared<OscillationWitness::State>(a, sigma, br, delta, side);
  st->eps = delta / 3;
  st->budget = delta / 12;
  st->s_hat = limit_approx(a, st->budget);
  // t is approximated through the bracketed partial sums: K blocks past
  // the block modulus telescope to the base prefix at f(K+1)-1.
  {
    const Index kb = br.block_modulus.at(st->budget);
    const Index upto = br.brackets.f.at(kb + 1) - 1;
    st->t_hat = partial_sum(st->rearranged, upto);
  }
  // delta claims |s - t| >= delta; the approximations must then be at
  // least delta - 2*(delta/12) = (5/6) delta apart, on the declared side.
  const Rational gap = st->side == Side::s_below_t ? Rational(st->t_hat - st->s_hat)
                                                   : Rational(st->s_hat - st->t_hat);
  if (gap < delta * make_rational(5, 6)) {
    throw separation_violation("limit approximations " + to_string(st->s_hat) + " and " +
                               to_string(st->t_hat) + " are only " + to_string(gap) +
                               " apart; delta = " + to_string(delta) + " is not a valid separation");
  }
  return OscillationWitness(std::move(st));
}

Index OscillationWitness::k(Index i) const {
  if (i < 1) throw spec_error("checkpoint index must be >= 1");
  st_->ensure_checkpoints(i);
  return st_->cps[static_cast<std::size_t>(i - 1)].k;
}

Index OscillationWitness::f_at(Index i) const {
  st_->ensure_checkpoints(i);
  return st_->cps[static_cast<std::size_t>(i - 1)].f_k;
}

bool OscillationWitness::is_sigma_side(Index i) const {
  st_->ensure_checkpoints(i);
  return st_->cps[static_cast<std::size_t>(i - 1)].sigma_side;
}

Index OscillationWitness::realized() const { return static_cast<Index>(st_->cps.size()); }

Rational OscillationWitness::block_sum(Index i) const {
  if (i < 1) throw spec_error("block index must be >= 1");
  const Rational hi = st_->checkpoint_partial(i + 1);
  const Rational lo = st_->checkpoint_partial(i);
  Rational block = hi - lo;
  const Rational bound = st_->delta / 3;
  if (!(abs(block) > bound)) {
    throw modulus_violation("oscillation block " + std::to_string(i) + " has |sum| = " +
                            to_string(abs(block)) + " <= delta/3 = " + to_string(bound));
  }
  return block;
}

const Rational& OscillationWitness::delta() const { return st_->delta; }
Rational OscillationWitness::s_hat() const { return st_->s_hat; }
Rational OscillationWitness::t_hat() const { return st_->t_hat; }
const IndexMap& OscillationWitness::f() const { return st_->br.brackets.f; }

Permutation OscillationWitness::tau() const {
  auto st = st_;
  return Permutation([st](Index n) { return st->tau_image(n); },
                     [st](Index n) { return st->tau_coverage(n); },
                     [st](Index p) { return st->tau_sup(p); });
}

Index divergence_witness(const OscillationWitness& w, const TermStream& a, const Rational& c) {
  if (sign(c) <= 0) throw spec_error("divergence witness needs C > 0");
  const Rational& delta = w.delta();
  // smallest j with (j - 1) delta > 3C
  BigInt j_big;
  {
    BigInt num = 3 * mpq_class(c).get_num() * mpq_class(delta).get_den();
    BigInt den = mpq_class(c).get_den() * mpq_class(delta).get_num();
    mpz_fdiv_q(j_big.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    j_big += 2;
  }
  if (!j_big.fits_slong_p()) throw spec_error("divergence witness index overflow");
  const Index j = static_cast<Index>(j_big.get_si());

  auto st = w.state();
  st->ensure_checkpoints(j);
  const Index m = std::max(st->cps[static_cast<std::size_t>(j - 1)].f_k,
                           st->cps[static_cast<std::size_t>(j - 1)].cum_sup);

  // Exact evidence: |a_n| >= 0, so the first prefix exceeding C settles
  // the comparison for the whole range up to M.
  RunningSum acc;
  const Index scan_cap = std::min<Index>(m, Index{1} << 26);
  for (Index n = 1; n <= scan_cap; ++n) {
    Rational t = a.term_raw(n);
    Rational at = abs(t);
    acc.add(at);
    if (acc.compare(c) > 0) return m;
  }
  throw invariant_violation("sum of |a_n| up to " + std::to_string(scan_cap) +
                            " never exceeded C = " + to_string(c));
}

}  // namespace serex
