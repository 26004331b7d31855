#pragma once
// Named specifications accepted on the command line. Streams, sets, and
// permutations always serialize as specs, never as infinite data.
//
//   series: alt-harmonic | log-harmonic | geometric:RAT | literal:R1,R2,...
//           | bdn:SETSPEC
//   set:    identity | finite-sup:V1,V2,... | custom:V1,V2,...
//           or JSON: {"kind":"finite-sup","values":[...]} |
//                    {"kind":"identity"} |
//                    {"kind":"custom","enum":[...],"tail":"constant"}
//   perm:   identity | two-pos-one-neg | riemann:(RAT|+inf|-inf)
//           | shuffle:SEED | explicit:I1,I2,...
//           | sigma-from-lambda:eps=RAT,upto=U[,sseq=ones|squares][,fuel=F]
//
// Rationals parse and print as "p/q" ("p" for integers).

#include <optional>
#include <string>

#include "serex/bdn.hpp"
#include "serex/rearrange.hpp"
#include "serex/series_zoo.hpp"

namespace serex {

struct RealizedSeries {
  std::string name;
  ConvergentSeries series;
  // Conditionally convergent series carry divergence certificates for
  // their sign parts and a term-decay map; absolutely convergent ones
  // leave these empty and cannot feed the rearrangement generator.
  std::optional<DivergenceCertificate> cert_plus;
  std::optional<DivergenceCertificate> cert_minus;
  std::function<Index(const Rational&)> term_decay;
};

RealizedSeries parse_series_spec(const std::string& text);
PseudoboundedSet parse_set_spec(const std::string& text);  // monotone-closed on return
RearrangementTarget parse_target(const std::string& text);
Permutation parse_perm_spec(const std::string& text, const RealizedSeries& context);

}  // namespace serex
