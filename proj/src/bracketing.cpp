#include "serex/bracketing.hpp"

#include <algorithm>

namespace serex {

IndexMap::IndexMap(std::function<Index(Index)> fn) : st_(std::make_shared<State>()) {
  if (!fn) throw spec_error("index map requires a function");
  st_->fn = std::move(fn);
}

Index IndexMap::at(Index k) const {
  if (k < 1) throw spec_error("index map queried at k < 1");
  State& st = *st_;
  if (st.realized.find(1) == st.realized.end()) {
    const Index v1 = st.fn(1);
    if (v1 != 1) throw spec_error("bracketing map must have f(1) = 1, got " + std::to_string(v1));
    st.realized.emplace(1, 1);
  }
  auto it = st.realized.find(k);
  if (it != st.realized.end()) return it->second;
  const Index v = st.fn(k);
  auto next = st.realized.upper_bound(k);
  if (next != st.realized.end() && v >= next->second) {
    throw spec_error("bracketing map not strictly increasing: f(" + std::to_string(k) + ") = " +
                     std::to_string(v) + " >= f(" + std::to_string(next->first) + ") = " +
                     std::to_string(next->second));
  }
  if (next != st.realized.begin()) {
    auto prev = std::prev(next);
    if (prev->first < k && v <= prev->second) {
      throw spec_error("bracketing map not strictly increasing: f(" + std::to_string(prev->first) +
                       ") = " + std::to_string(prev->second) + " >= f(" + std::to_string(k) + ") = " +
                       std::to_string(v));
    }
  }
  st.realized.emplace(k, v);
  return v;
}

Index index_map_lower_bound(const IndexMap& f, Index target, Index lo_k) {
  if (lo_k < 1) lo_k = 1;
  if (f.at(lo_k) >= target) return lo_k;
  // f(k) >= f(lo_k) + (k - lo_k) for strictly increasing integer maps, so
  // k = lo_k + (target - f(lo_k)) already reaches the target.
  Index hi = lo_k + (target - f.at(lo_k));
  Index step = 1;
  Index lo = lo_k;  // f(lo) < target
  while (lo + step < hi && f.at(lo + step) < target) {
    lo += step;
    step *= 2;
  }
  hi = std::min(hi, lo + step);
  while (lo + 1 < hi) {
    const Index mid = lo + (hi - lo) / 2;
    if (f.at(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

Bracketing bracket_series(const TermStream& s, IndexMap f) {
  f.at(1);  // reject f(1) != 1 eagerly
  TermStream blocks([s, f](Index k) {
    const Index lo = f.at(k);
    const Index hi = f.at(k + 1) - 1;
    RunningSum acc;
    for (Index i = lo; i <= hi; ++i) acc.add(s.term(i));
    return acc.value();
  });
  return Bracketing{std::move(f), s, std::move(blocks)};
}

Bracketing bracket_series(const TermStream& s, std::function<Index(Index)> f) {
  return bracket_series(s, IndexMap(std::move(f)));
}

}  // namespace serex
