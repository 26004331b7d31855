#include "serex/permutation.hpp"

#include <algorithm>

namespace serex {

Permutation::Permutation(Fn image, Fn coverage) : Permutation(std::move(image), std::move(coverage), nullptr) {}

Permutation::Permutation(Fn image, Fn coverage, Fn image_sup) : st_(std::make_shared<State>()) {
  if (!image) throw spec_error("permutation requires an image function");
  if (!coverage) throw spec_error("permutation requires a coverage certificate");
  st_->image = std::move(image);
  st_->coverage = std::move(coverage);
  st_->image_sup = std::move(image_sup);
}

Index Permutation::image(Index n) const {
  if (n < 1) throw spec_error("permutation index must be >= 1");
  State& st = *st_;
  auto it = st.memo.find(n);
  if (it != st.memo.end()) return it->second;
  const Index v = st.image(n);
  if (v < 1) throw invariant_violation("permutation image " + std::to_string(v) + " at position " + std::to_string(n));
  auto [vit, fresh] = st.value_pos.emplace(v, n);
  if (!fresh && vit->second != n) {
    throw injectivity_violation("value " + std::to_string(v) + " at positions " +
                                std::to_string(vit->second) + " and " + std::to_string(n));
  }
  st.memo.emplace(n, v);
  return v;
}

Index Permutation::coverage(Index n) const {
  if (n < 1) throw spec_error("coverage queried at N < 1");
  const Index m = st_->coverage(n);
  return m < n ? n : m;  // M certifying {1..N} coverage can never be < N
}

Index Permutation::image_sup(Index p) const {
  if (!st_->image_sup) throw spec_error("permutation has no image_sup certificate");
  const Index b = st_->image_sup(p);
  return b < p ? p : b;  // prefix of length p has some value >= ... keep sane floor
}

Permutation identity_permutation() {
  return Permutation([](Index n) { return n; }, [](Index n) { return n; },
                     [](Index p) { return p; });
}

Permutation transposition(Index i, Index j) {
  if (i < 1 || j < 1) throw spec_error("transposition of indices < 1");
  const Index hi = std::max(i, j);
  return Permutation(
      [i, j](Index n) { return n == i ? j : (n == j ? i : n); },
      [hi](Index n) { return std::max(n, hi); },
      [hi](Index p) { return std::max(p, hi); });
}

Index coverage_index(const Permutation& sigma, Index n) {
  if (n < 1) throw spec_error("coverage_index needs N >= 1");
  const Index m = sigma.coverage(n);
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  Index remaining = n;
  for (Index p = 1; p <= m && remaining > 0; ++p) {
    const Index v = sigma.image(p);
    if (v <= n && !seen[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = 1;
      --remaining;
    }
  }
  if (remaining > 0) {
    for (Index v = 1; v <= n; ++v) {
      if (!seen[static_cast<std::size_t>(v)]) {
        throw certificate_violation("coverage(" + std::to_string(n) + ") = " + std::to_string(m) +
                                    " but index " + std::to_string(v) + " is missing from the prefix");
      }
    }
  }
  return m;
}

TermStream apply_permutation(const TermStream& s, const Permutation& sigma) {
  return TermStream([s, sigma](Index n) { return s.term(sigma.image(n)); });
}

}  // namespace serex
