#pragma once
// Bracketings (f, b): a strictly increasing index map f with f(1) = 1 and
// the induced block stream b_k = sum_{i=f(k)}^{f(k+1)-1} a_i. Telescoping
// sum_{k<=K} b_k = sum_{n<f(K+1)} a_n holds with exact equality.

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "serex/stream.hpp"

namespace serex {

// Index map with lazy monotonicity validation: f(1) = 1 is checked on
// first use, and every newly realized value must be strictly between its
// realized neighbors. Realized values are kept sparse so constructions
// can probe far positions without materializing the prefix.
class IndexMap {
 public:
  explicit IndexMap(std::function<Index(Index)> fn);
  Index at(Index k) const;

 private:
  struct State {
    std::function<Index(Index)> fn;
    std::map<Index, Index> realized;
  };
  std::shared_ptr<State> st_;
};

// Smallest k >= lo_k with f(k) >= target, by galloping + binary search
// (strict increase gives f(k) >= f(lo_k) + (k - lo_k), so the search is
// bounded).
Index index_map_lower_bound(const IndexMap& f, Index target, Index lo_k);

struct Bracketing {
  IndexMap f;
  TermStream base;
  TermStream blocks;
};

Bracketing bracket_series(const TermStream& s, IndexMap f);
Bracketing bracket_series(const TermStream& s, std::function<Index(Index)> f);

// A bracketing together with a window modulus for its block series
// (certifies that sum b_k converges). This is the "convergent bracketing"
// hypothesis as data.
struct BracketedSeries {
  Bracketing brackets;
  CauchyModulus block_modulus;
};

}  // namespace serex
