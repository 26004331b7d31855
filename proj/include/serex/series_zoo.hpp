#pragma once
// Stock series and permutations with hand-derived certificates. Each
// modulus carries a short derivation note next to its definition; tests
// verify every certificate on sampled windows with exact arithmetic.

#include <cstdint>

#include "serex/bracketing.hpp"
#include "serex/permutation.hpp"
#include "serex/rearrange.hpp"
#include "serex/stream.hpp"

namespace serex::zoo {

// a_n = (-1)^{n+1}/n, sum ln 2.
ConvergentSeries alt_harmonic();

// a_n = q^n for |q| < 1, sum q/(1-q).
ConvergentSeries geometric(const Rational& ratio);

ConvergentSeries zero_series();

// Listed terms, then zeros forever.
ConvergentSeries literal_series(std::vector<Rational> terms);

// a_n = (-1)^{n+1}/bitlen(n). Conditionally convergent like the
// alternating harmonic series but with positive part diverging fast
// enough that divergence phases stay at desk scale.
ConvergentSeries log_harmonic();

// sigma = (1, 3, 2, 5, 7, 4, ...): two odd indices, then one even.
Permutation two_pos_one_neg();

// The alternating harmonic series rearranged by two_pos_one_neg, with its
// own window modulus; converges to (3/2) ln 2.
ConvergentSeries two_pos_one_neg_alt_harmonic();

// sigma = (1, 2, 4, 3, 6, 8, ...): one odd index, then two evens.
Permutation one_pos_two_neg();

// Rearrangement by one_pos_two_neg; converges to (1/2) ln 2, which sits
// below the base sum (handy for the mirrored oscillation side).
ConvergentSeries one_pos_two_neg_alt_harmonic();

// Coverage-certified pseudorandom permutation: shuffles each dyadic block
// (2^j, 2^{j+1}] in place with a seeded deterministic generator.
Permutation block_shuffle(std::uint64_t seed);

// Divergence certificates (exceed: C -> M with plus/minus-part prefix sum
// strictly above C) and term-decay maps for the conditionally convergent
// demo series.
DivergenceCertificate alt_harmonic_plus_cert();
DivergenceCertificate alt_harmonic_minus_cert();
std::function<Index(const Rational&)> alt_harmonic_term_decay();

DivergenceCertificate log_harmonic_plus_cert();
DivergenceCertificate log_harmonic_minus_cert();
std::function<Index(const Rational&)> log_harmonic_term_decay();

// Smallest N with sum_{n>N} |q|^n <= eps; absolute-tail certificate for
// geometric series.
Index geometric_abs_tail(const Rational& ratio, const Rational& eps);

// Rearrangement of an absolutely convergent series, its modulus derived
// from the coverage certificate and an absolute-tail map: windows past
// coverage(N_abs(eps)) only touch indices beyond N_abs(eps).
ConvergentSeries rearranged_absolutely_convergent(
    const ConvergentSeries& cs, const Permutation& sigma,
    std::function<Index(const Rational&)> abs_tail);

ConvergentSeries rearranged_geometric(const Rational& ratio, const Permutation& sigma);

}  // namespace serex::zoo
