#include "serex/rearrange.hpp"

#include <algorithm>

namespace serex {

SignSplit sign_split(const TermStream& s) {
  TermStream plus([s](Index n) {
    Rational t = s.term(n);
    return sign(t) > 0 ? t : Rational();
  });
  TermStream minus([s](Index n) {
    Rational t = s.term(n);
    return sign(t) < 0 ? Rational(-t) : Rational();
  });
  return {std::move(plus), std::move(minus)};
}

DivergenceCertificate::DivergenceCertificate(Fn exceed) : fn_(std::move(exceed)) {
  if (!fn_) throw spec_error("divergence certificate requires an exceed function");
}

Index DivergenceCertificate::exceed(const Rational& c) const {
  if (sign(c) <= 0) throw spec_error("divergence certificate queried at C <= 0");
  const Index m = fn_(c);
  return m < 1 ? 1 : m;
}

DivergenceCertificate scan_divergence_certificate(TermStream nonneg) {
  // The certified stream is nonnegative, so prefix sums are monotone and
  // the first prefix exceeding C certifies every later one.
  return DivergenceCertificate([nonneg](const Rational& c) {
    RunningSum acc;
    Index n = 0;
    while (true) {
      ++n;
      acc.add(nonneg.term_raw(n));
      if (acc.compare(c) > 0) return n;
      if (n > (Index{1} << 26)) {
        throw spec_error("divergence scan did not exceed " + to_string(c) + " at desk scale");
      }
    }
  });
}

GreedySchedule::GreedySchedule(TermStream s, RearrangementTarget target, DivergenceCertificate cert_plus,
                               DivergenceCertificate cert_minus,
                               std::function<Index(const Rational&)> term_decay)
    : s_(std::move(s)),
      target_(std::move(target)),
      cert_plus_(std::move(cert_plus)),
      cert_minus_(std::move(cert_minus)),
      term_decay_(std::move(term_decay)) {
  if (!term_decay_) throw spec_error("riemann schedule requires a term-decay map");
  if (target_.kind == RearrangementTarget::Kind::finite) {
    last_relation_ = sum_.compare(target_.value);
  }
}

namespace {
// A phase that runs this many appends past its last check re-derives its
// certified search bound; honest phases at desk scale stay well below it.
constexpr Index kGuardInterval = 256;
}  // namespace

void GreedySchedule::append(Index idx, const Rational& t) {
  if (sign(t) > 0) pos_mass_.add(t);
  if (sign(t) < 0) {
    Rational a = -t;
    neg_mass_.add(a);
  }
  sum_.add(t);
  emitted_.push_back(idx);
}

Index GreedySchedule::next_of_class(bool nonneg, Rational* term_out) {
  Index& ptr = nonneg ? next_nonneg_ : next_negative_;
  Index i = ptr;
  while (true) {
    Rational t = s_.term(i);
    if ((sign(t) >= 0) == nonneg) {
      ptr = i + 1;
      *term_out = t;
      return i;
    }
    ++i;
  }
}

void GreedySchedule::check_phase_bound(bool pos_phase, const Rational& still_needed_mass) {
  ++phase_len_;
  if (phase_len_ % kGuardInterval != 0) return;
  const Rational c = still_needed_mass + make_rational(1, 1000);
  if (sign(c) <= 0) return;
  const Index bound = pos_phase ? cert_plus_.exceed(c) : cert_minus_.exceed(c);
  const Index consumed_past = (pos_phase ? next_nonneg_ : next_negative_) - 1;
  if (consumed_past > bound) {
    throw certificate_violation("greedy phase exhausted its certified search bound " +
                                std::to_string(bound) + " without crossing");
  }
}

void GreedySchedule::step() {
  using Kind = RearrangementTarget::Kind;
  if (target_.kind == Kind::finite) {
    const Rational& x = target_.value;
    const bool take_pos = last_relation_ <= 0;  // sum <= x: append nonnegative
    Rational t;
    const Index idx = next_of_class(take_pos, &t);
    append(idx, t);
    const int rel = sum_.compare(x);
    if ((last_relation_ <= 0) != (rel <= 0)) {
      // Sign switch: the crossing term bounds the distance to the target.
      const Rational at = abs(t);
      if (!sum_.abs_diff_le(x, at)) {
        throw invariant_violation("sign-switch bound failed at position " +
                                  std::to_string(emitted_.size()) + ": |partial - " + to_string(x) +
                                  "| > " + to_string(at));
      }
      switches_.push_back({static_cast<Index>(emitted_.size()), idx, rel > 0});
      phase_len_ = 0;
    } else if ((rel <= 0) == take_pos) {
      // Still on the same side: total class mass needed to cross is
      // x + neg_mass (positive phase) or pos_mass - x (negative phase),
      // both fixed for the phase's duration.
      RunningSum needed = take_pos ? neg_mass_ : pos_mass_;
      if (take_pos) {
        needed.add(x);
      } else {
        needed.subtract(x);
      }
      check_phase_bound(take_pos, needed.round_up(1000));
    }
    last_relation_ = rel;
    return;
  }

  const bool up = target_.kind == Kind::plus_infinity;
  if (interlude_) {
    // One term of the opposite sign between divergence phases.
    Rational t;
    const Index idx = next_of_class(!up, &t);
    append(idx, t);
    interlude_ = false;
    phase_len_ = 0;
    return;
  }
  Rational t;
  const Index idx = next_of_class(up, &t);
  append(idx, t);
  const Rational lvl(static_cast<long>(up ? level_ : -level_));
  const int rel = sum_.compare(lvl);
  if (up ? rel > 0 : rel < 0) {
    phases_.push_back({static_cast<Index>(emitted_.size()), level_});
    ++level_;
    interlude_ = true;
    phase_len_ = 0;
    return;
  }
  RunningSum needed = up ? neg_mass_ : pos_mass_;
  needed.add(Rational(static_cast<long>(level_)));
  check_phase_bound(up, needed.round_up(1000));
}

void GreedySchedule::ensure(Index count) {
  while (static_cast<Index>(emitted_.size()) < count) step();
}

Index GreedySchedule::emitted(Index position) {
  if (position < 1) throw spec_error("schedule position must be >= 1");
  ensure(position);
  return emitted_[static_cast<std::size_t>(position - 1)];
}

Rational GreedySchedule::partial_at(Index position) {
  ensure(position);
  RunningSum acc;
  for (Index p = 1; p <= position; ++p) acc.add(s_.term(emitted_[static_cast<std::size_t>(p - 1)]));
  return acc.value();
}

bool GreedySchedule::check_partial_near(Index position, const Rational& bound) {
  ensure(position);
  if (target_.kind != RearrangementTarget::Kind::finite) {
    throw spec_error("check_partial_near applies to finite targets only");
  }
  if (position == static_cast<Index>(emitted_.size())) {
    return sum_.abs_diff_le(target_.value, bound);
  }
  RunningSum acc;
  for (Index p = 1; p <= position; ++p) acc.add(s_.term(emitted_[static_cast<std::size_t>(p - 1)]));
  return acc.abs_diff_le(target_.value, bound);
}

Index GreedySchedule::coverage_position(Index n) {
  if (n < 1) throw spec_error("coverage_position needs n >= 1");
  Index steps = 0;
  while (!(next_nonneg_ > n && next_negative_ > n)) {
    step();
    if (++steps > (Index{1} << 26)) {
      throw invariant_violation("coverage scan exceeded the desk-scale step budget at n = " +
                                std::to_string(n));
    }
  }
  return static_cast<Index>(emitted_.size());
}

Index GreedySchedule::settle_position(const Rational& delta) {
  if (sign(delta) <= 0) throw spec_error("settle_position needs delta > 0");
  return coverage_position(std::max<Index>(term_decay_(delta), 1));
}

std::shared_ptr<GreedySchedule> riemann_schedule(TermStream s, RearrangementTarget target,
                                                 DivergenceCertificate cert_plus,
                                                 DivergenceCertificate cert_minus,
                                                 std::function<Index(const Rational&)> term_decay) {
  return std::make_shared<GreedySchedule>(std::move(s), std::move(target), std::move(cert_plus),
                                          std::move(cert_minus), std::move(term_decay));
}

Permutation schedule_permutation(std::shared_ptr<GreedySchedule> sched) {
  auto img = [sched](Index n) { return sched->emitted(n); };
  auto cov = [sched](Index n) { return sched->coverage_position(n); };
  return Permutation(img, cov);
}

Permutation riemann_permutation(const TermStream& s, const RearrangementTarget& target,
                                const DivergenceCertificate& cert_plus,
                                const DivergenceCertificate& cert_minus,
                                std::function<Index(const Rational&)> term_decay) {
  return schedule_permutation(riemann_schedule(s, target, cert_plus, cert_minus, std::move(term_decay)));
}

}  // namespace serex
