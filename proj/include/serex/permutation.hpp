#pragma once
// Permutations of N+ as injective streams with coverage certificates.
// coverage(N) = M certifies {1..N} is contained in {image(1)..image(M)};
// every construction here silently relies on surjectivity, so values
// without a coverage certificate cannot be built. The optional image_sup
// certificate bounds max{image(1..P)} and lets constructions that only
// need an upper bound skip long prefix scans.

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "serex/errors.hpp"
#include "serex/stream.hpp"

namespace serex {

class Permutation {
 public:
  using Fn = std::function<Index(Index)>;
  static constexpr Index kDefaultMemoCap = Index{1} << 20;

  Permutation(Fn image, Fn coverage);
  Permutation(Fn image, Fn coverage, Fn image_sup);

  // Memoized; checks injectivity against every position realized so far
  // and throws injectivity_violation on a collision.
  Index image(Index n) const;
  // No cache, no check; for long scans.
  Index image_raw(Index n) const { return st_->image(n); }

  Index coverage(Index n) const;

  bool has_image_sup() const { return static_cast<bool>(st_->image_sup); }
  Index image_sup(Index p) const;

 private:
  struct State {
    Fn image;
    Fn coverage;
    Fn image_sup;
    std::unordered_map<Index, Index> memo;        // position -> value
    std::unordered_map<Index, Index> value_pos;   // value -> position
  };
  std::shared_ptr<State> st_;
};

Permutation identity_permutation();
Permutation transposition(Index i, Index j);

// Returns M = coverage(N) after verifying {1..N} subset of image(1..M)
// by prefix scan; throws certificate_violation when the certificate lies.
Index coverage_index(const Permutation& sigma, Index n);

// term(n) = s.term(sigma(n)); injectivity violations detected during
// prefix evaluation propagate.
TermStream apply_permutation(const TermStream& s, const Permutation& sigma);

}  // namespace serex
