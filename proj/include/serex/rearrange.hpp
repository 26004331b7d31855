#pragma once
// The full, extended Riemann rearrangement theorem as a generator: given a
// conditionally convergent series with divergence certificates for its
// positive and negative parts, emit a permutation whose rearrangement
// converges to a prescribed rational target or diverges to +/- infinity.
// The schedule is the standard greedy crossing schedule; at every sign
// switch the exact bound |partial - target| <= |last appended term| is
// checked inline.

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "serex/permutation.hpp"
#include "serex/stream.hpp"

namespace serex {

struct SignSplit {
  TermStream plus;   // a_n^+ = max(a_n, 0)
  TermStream minus;  // a_n^- = max(-a_n, 0)
};

SignSplit sign_split(const TermStream& s);

// Operational divergence: exceed(C) = M with the certified stream's exact
// prefix sum at M strictly greater than C.
class DivergenceCertificate {
 public:
  using Fn = std::function<Index(const Rational&)>;
  explicit DivergenceCertificate(Fn exceed);
  Index exceed(const Rational& c) const;  // requires c > 0

 private:
  Fn fn_;
};

// Honest certificate built by exact prefix scan of a nonnegative stream.
DivergenceCertificate scan_divergence_certificate(TermStream nonneg);

struct RearrangementTarget {
  enum class Kind { finite, plus_infinity, minus_infinity };
  Kind kind = Kind::finite;
  Rational value;

  static RearrangementTarget finite(Rational x) { return {Kind::finite, std::move(x)}; }
  static RearrangementTarget plus_infinity() { return {Kind::plus_infinity, Rational()}; }
  static RearrangementTarget minus_infinity() { return {Kind::minus_infinity, Rational()}; }
};

// Lazy greedy schedule. Positions are 1-based; emitted(p) is the original
// index placed at position p. Nonnegative terms (including zeros) are
// consumed in index order, strictly negative terms in index order; the two
// scan pointers make injectivity and eventual coverage structural.
class GreedySchedule {
 public:
  struct SwitchEntry {
    Index position;  // position whose append crossed the target
    Index index;     // original index appended there
    bool crossed_up;
  };
  struct PhaseEntry {
    Index position;  // position at which |partial| first exceeded `level`
    Index level;
  };

  GreedySchedule(TermStream s, RearrangementTarget target, DivergenceCertificate cert_plus,
                 DivergenceCertificate cert_minus, std::function<Index(const Rational&)> term_decay);

  void ensure(Index count);
  Index emitted(Index position);
  Index emitted_count() const { return static_cast<Index>(emitted_.size()); }

  const std::vector<SwitchEntry>& switches() const { return switches_; }
  const std::vector<PhaseEntry>& phases() const { return phases_; }

  // Exact partial sum of the rearranged series after `position` terms.
  Rational partial_at(Index position);

  // Exact check |partial_at(position) - target| <= bound, finite targets.
  bool check_partial_near(Index position, const Rational& bound);

  // First position by which both scan pointers have passed n, i.e. all
  // original indices 1..n are emitted.
  Index coverage_position(Index n);

  // Position past which every switch satisfies |partial - target| <= delta:
  // once all indices below term_decay(delta) are consumed, every appended
  // term is <= delta in magnitude.
  Index settle_position(const Rational& delta);

  const RearrangementTarget& target() const { return target_; }

 private:
  void step();
  void append(Index idx, const Rational& t);
  Index next_of_class(bool nonneg, Rational* term_out);
  void check_phase_bound(bool pos_phase, const Rational& still_needed_mass);

  TermStream s_;
  RearrangementTarget target_;
  DivergenceCertificate cert_plus_, cert_minus_;
  std::function<Index(const Rational&)> term_decay_;

  RunningSum sum_;       // exact partial sum
  RunningSum pos_mass_;  // sum of appended a^+ values
  RunningSum neg_mass_;  // sum of appended a^- values (nonnegative)
  Index next_nonneg_ = 1;
  Index next_negative_ = 1;
  std::vector<Index> emitted_;
  std::vector<SwitchEntry> switches_;
  std::vector<PhaseEntry> phases_;
  int last_relation_ = 0;  // finite targets: sign of (sum - x) before this step
  Index level_ = 1;        // infinite targets: next threshold to cross
  bool interlude_ = false; // infinite targets: one opposite term due
  Index phase_len_ = 0;    // appends since the current phase began
};

std::shared_ptr<GreedySchedule> riemann_schedule(TermStream s, RearrangementTarget target,
                                                 DivergenceCertificate cert_plus,
                                                 DivergenceCertificate cert_minus,
                                                 std::function<Index(const Rational&)> term_decay);

Permutation schedule_permutation(std::shared_ptr<GreedySchedule> sched);

Permutation riemann_permutation(const TermStream& s, const RearrangementTarget& target,
                                const DivergenceCertificate& cert_plus,
                                const DivergenceCertificate& cert_minus,
                                std::function<Index(const Rational&)> term_decay);

}  // namespace serex
