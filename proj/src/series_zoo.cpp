#include "serex/series_zoo.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace serex::zoo {
namespace {

// bitlen(n) = number of binary digits of n >= 1.
Index bitlen(Index n) {
  Index b = 0;
  while (n > 0) {
    ++b;
    n >>= 1;
  }
  return b;
}

Index ceil_div_big(const Rational& q) {
  // ceil(num/den) for q > 0, as Index.
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), mpq_numref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()));
  if (!c.fits_slong_p()) throw spec_error("modulus index does not fit in 64 bits: " + to_string(c));
  return static_cast<Index>(c.get_si());
}

}  // namespace

ConvergentSeries alt_harmonic() {
  TermStream terms([](Index n) { return make_rational(n % 2 == 1 ? 1 : -1, static_cast<long>(n)); });
  // Alternating with decreasing magnitudes, so any window starting at m has
  // |sum| <= |a_m| = 1/m. N(eps) = ceil(1/eps).
  CauchyModulus mod([](const Rational& eps) {
    Rational inv = 1 / eps;
    return ceil_div_big(inv);
  });
  return {std::move(terms), std::move(mod)};
}

ConvergentSeries geometric(const Rational& ratio) {
  if (!(abs(ratio) < 1)) throw spec_error("geometric ratio must satisfy |ratio| < 1, got " + to_string(ratio));
  Rational q = ratio;
  TermStream terms([q](Index n) {
    Rational r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(q.get_mpq_t()), static_cast<unsigned long>(n));
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(q.get_mpq_t()), static_cast<unsigned long>(n));
    r.canonicalize();
    return r;
  });
  // |sum_{n=m}^{m'} q^n| <= |q|^m / (1 - |q|); take the smallest N with
  // |q|^N <= eps (1 - |q|), found by exact repeated multiplication.
  Rational aq = abs(q);
  CauchyModulus mod([aq](const Rational& eps) {
    Rational bound = eps * (1 - aq);
    Rational p = aq;
    Index n = 1;
    while (p > bound) {
      p *= aq;
      ++n;
      if (n > (Index{1} << 40)) throw spec_error("geometric modulus search overflow");
    }
    return n;
  });
  return {std::move(terms), std::move(mod)};
}

ConvergentSeries zero_series() {
  TermStream terms([](Index) { return Rational(); });
  CauchyModulus mod([](const Rational&) { return Index{1}; });
  return {std::move(terms), std::move(mod)};
}

ConvergentSeries literal_series(std::vector<Rational> terms) {
  const Index len = static_cast<Index>(terms.size());
  auto vals = std::make_shared<std::vector<Rational>>(std::move(terms));
  TermStream stream([vals, len](Index n) {
    return n <= len ? (*vals)[static_cast<std::size_t>(n - 1)] : Rational();
  });
  // All windows past the listed prefix are empty sums.
  CauchyModulus mod([len](const Rational&) { return len + 1; });
  return {std::move(stream), std::move(mod)};
}

ConvergentSeries log_harmonic() {
  TermStream terms([](Index n) { return make_rational(n % 2 == 1 ? 1 : -1, static_cast<long>(bitlen(n))); });
  // Alternating, magnitudes 1/bitlen(n) nonincreasing: window from m is
  // bounded by 1/bitlen(m); bitlen(n) >= k for n >= 2^{k-1}.
  CauchyModulus mod([](const Rational& eps) {
    const Index k = ceil_div_big(1 / eps);
    if (k > 62) throw spec_error("log_harmonic modulus out of 64-bit range for eps " + to_string(eps));
    return Index{1} << (k - 1);
  });
  return {std::move(terms), std::move(mod)};
}

Permutation two_pos_one_neg() {
  // position 3g-2 -> 4g-3, position 3g-1 -> 4g-1, position 3g -> 2g.
  auto img = [](Index n) {
    const Index g = (n + 2) / 3;
    switch (n % 3) {
      case 1: return 4 * g - 3;
      case 2: return 4 * g - 1;
      default: return 2 * g;
    }
  };
  // Value positions: even e sits at 3e/2, odd o at most (3o+3)/4, so the
  // largest even value <= N realizes the cover: coverage(N) = 3*floor(N/2).
  auto cov = [](Index n) { return n <= 1 ? Index{1} : 3 * (n / 2); };
  // Values over positions 1..P: odd values 4g-3, 4g-1 <= 4*ceil(P/3),
  // even values 2g <= 4*ceil(P/3).
  auto sup = [](Index p) { return 4 * ((p + 2) / 3); };
  return Permutation(img, cov, sup);
}

ConvergentSeries two_pos_one_neg_alt_harmonic() {
  TermStream terms = apply_permutation(alt_harmonic().terms, two_pos_one_neg());
  // Group g of the rearranged stream is (1/(4g-3), 1/(4g-1), -1/(2g)) with
  // group sum S_g = 3/(4g(4g-3)) + 1/(4g(4g-1)), so S_g <= 1/(4g(g-1)) and
  // sum_{g>=G} S_g <= 1/(4(G-1)). A window starting at position m inside
  // group g0 = ceil(m/3) splits into a piece of g0 (<= 2/(4g0-3)), whole
  // groups (<= 1/(4g0)), and a head of the last group (<= 2/(4g0+1)):
  // |window| <= max(2/(4g0-3), 5/(4g0)) <= 15/(4m-9) for m >= 3. With
  // N(eps) = max(12, ceil(5/eps)), windows from m >= N are <= eps.
  CauchyModulus mod([](const Rational& eps) {
    const Index n = ceil_div_big(5 / eps);
    return n < 12 ? 12 : n;
  });
  return {std::move(terms), std::move(mod)};
}

Permutation one_pos_two_neg() {
  // position 3g-2 -> 2g-1, position 3g-1 -> 4g-2, position 3g -> 4g.
  auto img = [](Index n) {
    const Index g = (n + 2) / 3;
    switch (n % 3) {
      case 1: return 2 * g - 1;
      case 2: return 4 * g - 2;
      default: return 4 * g;
    }
  };
  // Odd v sits at (3v-1)/2, evens at most (3v+2)/4; the largest odd value
  // below N dominates once N >= 3.
  auto cov = [](Index n) {
    const Index odd = n % 2 == 1 ? n : n - 1;
    Index m = (3 * odd - 1) / 2;
    if (n >= 2) m = std::max(m, (3 * n + 2) / 4);
    return m;
  };
  auto sup = [](Index p) { return 4 * ((p + 2) / 3); };
  return Permutation(img, cov, sup);
}

ConvergentSeries one_pos_two_neg_alt_harmonic() {
  TermStream terms = apply_permutation(alt_harmonic().terms, one_pos_two_neg());
  // Group g is (1/(2g-1), -1/(4g-2), -1/(4g)) with group sum
  // S_g = 1/(4g(2g-1)) <= 1/(4g(g-1)), so sum_{g>=G} S_g <= 1/(4(G-1)).
  // Any piece of group g is bounded by 1/(2g-1), so a window starting at
  // m inside group g0 = ceil(m/3) obeys |window| <= 2/(2g0-1) + 1/(4g0)
  // <= 9/(2m-3); with N(eps) = max(15, ceil(6/eps)) windows from m >= N
  // stay below eps.
  CauchyModulus mod([](const Rational& eps) {
    const Index n = ceil_div_big(6 / eps);
    return n < 15 ? 15 : n;
  });
  return {std::move(terms), std::move(mod)};
}

Permutation block_shuffle(std::uint64_t seed) {
  // Fixed point at 1; block (2^j, 2^{j+1}] is shuffled in place by a
  // generator seeded from (seed, j). Shuffled blocks are cached so image
  // lookups amortize to O(1) per position.
  auto cache = std::make_shared<std::map<Index, std::vector<Index>>>();
  auto img = [seed, cache](Index n) {
    if (n <= 1) return n;
    Index j = 0;
    while ((Index{2} << j) < n) ++j;  // smallest j with n <= 2^{j+1}
    auto it = cache->find(j);
    if (it == cache->end()) {
      const Index lo = (Index{1} << j) + 1, hi = Index{2} << j;
      std::vector<Index> block;
      block.reserve(static_cast<std::size_t>(hi - lo + 1));
      for (Index v = lo; v <= hi; ++v) block.push_back(v);
      std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(j + 1)));
      std::shuffle(block.begin(), block.end(), rng);
      it = cache->emplace(j, std::move(block)).first;
    }
    return it->second[static_cast<std::size_t>(n - ((Index{1} << j) + 1))];
  };
  auto next_pow2 = [](Index n) {
    Index p = 1;
    while (p < n) p <<= 1;
    return p;
  };
  return Permutation(img, next_pow2, next_pow2);
}

DivergenceCertificate alt_harmonic_plus_cert() {
  return scan_divergence_certificate(
      TermStream([](Index n) { return n % 2 == 1 ? make_rational(1, static_cast<long>(n)) : Rational(); }));
}

DivergenceCertificate alt_harmonic_minus_cert() {
  return scan_divergence_certificate(
      TermStream([](Index n) { return n % 2 == 0 ? make_rational(1, static_cast<long>(n)) : Rational(); }));
}

std::function<Index(const Rational&)> alt_harmonic_term_decay() {
  return [](const Rational& eps) {
    Rational inv = 1 / eps;
    return ceil_div_big(inv);
  };
}

namespace {

// Certificates for log_harmonic come from exact block mass: odd (resp.
// even) indices with bitlen j >= 2 number 2^{j-2} in [2^{j-1}, 2^j), each
// of value 1/j. The closed-form block count keeps exceed() cheap; the
// returned M is still verified by exact summation where it is consumed.
DivergenceCertificate log_harmonic_part_cert(bool odd_part) {
  return DivergenceCertificate([odd_part](const Rational& c) {
    RunningSum acc;
    if (odd_part) acc.add(Rational(1));  // n = 1 contributes 1/bitlen(1) = 1
    Index j = 2;
    while (acc.compare(c) <= 0) {
      if (j > 62) throw spec_error("log_harmonic divergence certificate out of range");
      acc.add(make_rational(Index{1} << (j - 2), j));
      ++j;
    }
    return (Index{1} << (j - 1)) - 1;  // all indices with bitlen <= j-1
  });
}

}  // namespace

DivergenceCertificate log_harmonic_plus_cert() { return log_harmonic_part_cert(true); }
DivergenceCertificate log_harmonic_minus_cert() { return log_harmonic_part_cert(false); }

std::function<Index(const Rational&)> log_harmonic_term_decay() {
  return [](const Rational& eps) {
    const Index k = ceil_div_big(1 / eps);
    if (k > 62) throw spec_error("log_harmonic term decay out of 64-bit range");
    return Index{1} << (k - 1);
  };
}

Index geometric_abs_tail(const Rational& ratio, const Rational& eps) {
  // sum_{n>N} |q|^n = |q|^{N+1}/(1-|q|) <= eps
  const Rational aq = abs(ratio);
  Rational bound = eps * (1 - aq);
  Rational p = aq;  // |q|^{N+1} with N = 0
  Index n = 0;
  while (p > bound) {
    p *= aq;
    ++n;
    if (n > (Index{1} << 40)) throw spec_error("geometric tail search overflow");
  }
  return n;
}

ConvergentSeries rearranged_absolutely_convergent(const ConvergentSeries& cs, const Permutation& sigma,
                                                  std::function<Index(const Rational&)> abs_tail) {
  TermStream terms = apply_permutation(cs.terms, sigma);
  // Positions past coverage(N_abs(eps)) carry pairwise distinct indices all
  // beyond N_abs(eps), so any such window is dominated by the absolute tail.
  CauchyModulus mod([sigma, abs_tail](const Rational& eps) {
    return sigma.coverage(std::max<Index>(abs_tail(eps), 1)) + 1;
  });
  return {std::move(terms), std::move(mod)};
}

ConvergentSeries rearranged_geometric(const Rational& ratio, const Permutation& sigma) {
  const Rational q = ratio;
  return rearranged_absolutely_convergent(
      geometric(ratio), sigma, [q](const Rational& eps) { return geometric_abs_tail(q, eps); });
}

}  // namespace serex::zoo
