#include "serex/specs.hpp"

#include <json.hpp>

#include "serex/instrument.hpp"

namespace serex {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

Rational require_rational(const std::string& text, const std::string& what) {
  auto q = parse_rational(text);
  if (!q) throw spec_error("bad rational for " + what + ": '" + text + "'");
  return *q;
}

Index require_index(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw spec_error("bad integer for " + what + ": '" + text + "'");
  }
}

std::vector<Index> parse_index_list(const std::string& text, const std::string& what) {
  std::vector<Index> out;
  for (const std::string& part : split(text, ',')) {
    if (part.empty()) throw spec_error("empty entry in " + what + " list");
    out.push_back(require_index(part, what));
  }
  return out;
}

PseudoboundedSet set_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw spec_error(std::string("bad set JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw spec_error("set JSON needs a string \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  auto values_of = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].empty()) {
      throw spec_error("set JSON needs a nonempty \"" + std::string(key) + "\" array");
    }
    std::vector<Index> vals;
    for (const auto& v : j[key]) {
      if (!v.is_number_integer()) throw spec_error("set values must be integers");
      vals.push_back(v.get<Index>());
    }
    return vals;
  };
  if (kind == "identity") return make_identity_set();
  if (kind == "finite-sup") return make_finite_sup_set(values_of("values"));
  if (kind == "custom") {
    if (j.contains("tail") && j["tail"] != "constant") {
      throw spec_error("custom set tail must be \"constant\"");
    }
    return make_custom_set(values_of("enum"));
  }
  throw spec_error("unknown set kind '" + kind + "'");
}

}  // namespace

PseudoboundedSet parse_set_spec(const std::string& text) {
  PseudoboundedSet raw = [&] {
    if (!text.empty() && text.front() == '{') return set_from_json(text);
    if (text == "identity") return make_identity_set();
    const std::size_t colon = text.find(':');
    if (colon != std::string::npos) {
      const std::string kind = text.substr(0, colon);
      const std::string args = text.substr(colon + 1);
      if (kind == "finite-sup") return make_finite_sup_set(parse_index_list(args, "set values"));
      if (kind == "custom") return make_custom_set(parse_index_list(args, "set enum"));
    }
    throw spec_error("unknown set spec '" + text + "'");
  }();
  return monotone_closure(raw);
}

RealizedSeries parse_series_spec(const std::string& text) {
  if (text == "alt-harmonic") {
    return {text, zoo::alt_harmonic(), zoo::alt_harmonic_plus_cert(), zoo::alt_harmonic_minus_cert(),
            zoo::alt_harmonic_term_decay()};
  }
  if (text == "log-harmonic") {
    return {text, zoo::log_harmonic(), zoo::log_harmonic_plus_cert(), zoo::log_harmonic_minus_cert(),
            zoo::log_harmonic_term_decay()};
  }
  const std::size_t colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    const std::string args = text.substr(colon + 1);
    if (kind == "geometric") {
      return {text, zoo::geometric(require_rational(args, "geometric ratio")), std::nullopt,
              std::nullopt, nullptr};
    }
    if (kind == "literal") {
      std::vector<Rational> terms;
      for (const std::string& part : split(args, ',')) {
        terms.push_back(require_rational(part, "literal term"));
      }
      return {text, zoo::literal_series(std::move(terms)), std::nullopt, std::nullopt, nullptr};
    }
    if (kind == "bdn") {
      PseudoboundedSet set = parse_set_spec(args);
      BdnSeries b = bdn_series(set);
      // Sign parts of (-1)^n a_n: plus = even indices, minus = odd.
      TermStream plus([b](Index n) {
        Rational t = b.signed_terms.term(n);
        return sign(t) > 0 ? t : Rational();
      });
      TermStream minus([b](Index n) {
        Rational t = b.signed_terms.term(n);
        return sign(t) < 0 ? Rational(-t) : Rational();
      });
      return {text,
              {b.signed_terms, b.modulus},
              scan_divergence_certificate(plus),
              scan_divergence_certificate(minus),
              [](const Rational& eps) {  // |a_n| <= 1/n
                BigInt c;
                mpz_cdiv_q(c.get_mpz_t(), mpq_denref(eps.get_mpq_t()), mpq_numref(eps.get_mpq_t()));
                return c.fits_slong_p() ? static_cast<Index>(c.get_si()) : throw spec_error("eps too small");
              }};
    }
  }
  throw spec_error("unknown series spec '" + text + "'");
}

RearrangementTarget parse_target(const std::string& text) {
  if (text == "+inf" || text == "+INF" || text == "inf") return RearrangementTarget::plus_infinity();
  if (text == "-inf" || text == "-INF") return RearrangementTarget::minus_infinity();
  return RearrangementTarget::finite(require_rational(text, "target"));
}

Permutation parse_perm_spec(const std::string& text, const RealizedSeries& context) {
  if (text == "identity") return identity_permutation();
  if (text == "two-pos-one-neg") return zoo::two_pos_one_neg();
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) throw spec_error("unknown permutation spec '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  if (kind == "shuffle") {
    return zoo::block_shuffle(static_cast<std::uint64_t>(require_index(args, "shuffle seed")));
  }
  if (kind == "explicit") {
    auto prefix = std::make_shared<std::vector<Index>>(parse_index_list(args, "explicit prefix"));
    const Index len = static_cast<Index>(prefix->size());
    std::vector<char> seen(static_cast<std::size_t>(len) + 1, 0);
    for (Index v : *prefix) {
      if (v < 1 || v > len || seen[static_cast<std::size_t>(v)]) {
        throw spec_error("explicit prefix must be a permutation of 1..len to admit an identity tail");
      }
      seen[static_cast<std::size_t>(v)] = 1;
    }
    return Permutation(
        [prefix, len](Index n) { return n <= len ? (*prefix)[static_cast<std::size_t>(n - 1)] : n; },
        [len](Index n) { return std::max(n, len); }, [len](Index p) { return std::max(p, len); });
  }
  if (kind == "riemann") {
    if (!context.cert_plus || !context.cert_minus || !context.term_decay) {
      throw spec_error("series '" + context.name +
                       "' has no divergence certificates; riemann permutations need a conditionally "
                       "convergent series");
    }
    return riemann_permutation(context.series.terms, parse_target(args), *context.cert_plus,
                               *context.cert_minus, context.term_decay);
  }
  if (kind == "sigma-from-lambda") {
    Rational eps;
    bool have_eps = false;
    Index upto = 0, fuel = 100000;
    std::string sseq = "squares";
    for (const std::string& part : split(args, ',')) {
      const std::size_t eq = part.find('=');
      if (eq == std::string::npos) throw spec_error("sigma-from-lambda args are key=value pairs");
      const std::string key = part.substr(0, eq), val = part.substr(eq + 1);
      if (key == "eps") {
        eps = require_rational(val, "eps");
        have_eps = true;
      } else if (key == "upto") {
        upto = require_index(val, "upto");
      } else if (key == "fuel") {
        fuel = require_index(val, "fuel");
      } else if (key == "sseq") {
        sseq = val;
      } else {
        throw spec_error("unknown sigma-from-lambda key '" + key + "'");
      }
    }
    if (!have_eps || upto < 1) throw spec_error("sigma-from-lambda needs eps=RAT and upto=U");
    PlusTailPredicate p(context.series.terms, eps);
    std::function<Index(Index)> rule;
    if (sseq == "ones") {
      rule = [](Index) { return Index{1}; };
    } else if (sseq == "squares") {
      rule = [](Index n) { return n * n; };
    } else {
      throw spec_error("unknown s-sequence rule '" + sseq + "'");
    }
    auto entry = [p, rule, fuel](Index n) {
      const Index value = n == 1 ? 1 : rule(n);
      const SMembership m = kappa(p, value, fuel);
      if (!m.is_member()) {
        throw spec_error("s-sequence value " + std::to_string(value) +
                         " has no membership witness within fuel " + std::to_string(fuel));
      }
      return SSeqEntry{value, m.value};
    };
    LambdaStream ls = lambda_stream(p, entry);
    return sigma_from_lambda(context.series.terms, bad_intervals(ls, upto));
  }
  throw spec_error("unknown permutation spec '" + text + "'");
}

}  // namespace serex
