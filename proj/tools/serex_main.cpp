// serex: exact-rational series rearrangement laboratory.
//
// Subcommands run the library constructions and emit CSV partial-sum
// trajectories and certificate check results. All numeric output is exact
// "p/q"; an optional --float flag appends a decimal convenience column.
// Exit status: 0 ok, 2 spec/usage error, 3 certificate or invariant
// violation (with the violating exact value printed).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "serex/bdn.hpp"
#include "serex/instrument.hpp"
#include "serex/oscillate.hpp"
#include "serex/rearrange.hpp"
#include "serex/series_zoo.hpp"
#include "serex/specs.hpp"

namespace {

using namespace serex;

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw spec_error("cannot open output file '" + path + "'");
  return file;
}

double approx(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

void cmd_sums(const std::string& series_spec, Index terms, const std::string& perm_spec,
              const std::string& out_path, bool with_float) {
  if (terms < 0) throw spec_error("--terms must be >= 0");
  RealizedSeries rs = parse_series_spec(series_spec);
  TermStream stream = rs.series.terms;
  if (!perm_spec.empty()) stream = apply_permutation(stream, parse_perm_spec(perm_spec, rs));
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  out << "n,term,partial_sum" << (with_float ? ",partial_float" : "") << "\n";
  RunningSum acc;
  for (Index n = 1; n <= terms; ++n) {
    const Rational t = stream.term(n);
    acc.add(t);
    const Rational p = acc.value();
    out << n << ',' << to_string(t) << ',' << to_string(p);
    if (with_float) out << ',' << approx(p);
    out << "\n";
  }
}

void cmd_rearrange(const std::string& series_spec, const std::string& target_spec, Index terms) {
  if (terms < 1) throw spec_error("--terms must be >= 1");
  RealizedSeries rs = parse_series_spec(series_spec);
  if (!rs.cert_plus || !rs.cert_minus || !rs.term_decay) {
    throw spec_error("series '" + rs.name + "' is not conditionally convergent (no certificates)");
  }
  const RearrangementTarget target = parse_target(target_spec);
  auto sched = riemann_schedule(rs.series.terms, target, *rs.cert_plus, *rs.cert_minus, rs.term_decay);
  sched->ensure(terms);
  std::cout << "prefix:";
  for (Index p = 1; p <= terms; ++p) std::cout << ' ' << sched->emitted(p);
  std::cout << "\n";
  if (target.kind == RearrangementTarget::Kind::finite) {
    std::cout << "switches: position,index,partial,last_term\n";
    for (const auto& sw : sched->switches()) {
      if (sw.position > terms) break;
      std::cout << sw.position << ',' << sw.index << ',' << to_string(sched->partial_at(sw.position))
                << ',' << to_string(rs.series.terms.term(sw.index)) << "\n";
    }
  } else {
    std::cout << "phases: position,level,partial\n";
    for (const auto& ph : sched->phases()) {
      if (ph.position > terms) break;
      std::cout << ph.position << ',' << ph.level << ',' << to_string(sched->partial_at(ph.position))
                << "\n";
    }
  }
}

void cmd_bracket(const std::string& series_spec, const std::string& f_spec, Index blocks) {
  if (blocks < 1) throw spec_error("--blocks must be >= 1");
  RealizedSeries rs = parse_series_spec(series_spec);
  std::function<Index(Index)> f;
  if (f_spec == "identity") {
    f = [](Index k) { return k; };
  } else if (f_spec == "dyadic") {
    f = [](Index k) { return Index{1} << (k - 1); };
  } else if (f_spec == "odd") {
    f = [](Index k) { return 2 * k - 1; };
  } else {
    throw spec_error("unknown bracketing '" + f_spec + "' (identity|dyadic|odd)");
  }
  Bracketing br = bracket_series(rs.series.terms, f);
  std::cout << "k,f_k,block_sum\n";
  for (Index k = 1; k <= blocks; ++k) {
    std::cout << k << ',' << br.f.at(k) << ',' << to_string(br.blocks.term(k)) << "\n";
  }
  const Rational lhs = partial_sum(br.blocks, blocks);
  const Rational rhs = partial_sum(rs.series.terms, br.f.at(blocks + 1) - 1);
  std::cout << "telescoping,K=" << blocks << ',' << to_string(lhs) << ',' << to_string(rhs) << ','
            << (lhs == rhs ? "PASS" : "FAIL") << "\n";
  if (lhs != rhs) {
    throw invariant_violation("telescoping mismatch: " + to_string(lhs) + " != " + to_string(rhs));
  }
}

void cmd_oscillate(const std::string& series_spec, const std::string& sigma_spec, const std::string& delta_spec,
                   Index blocks) {
  if (series_spec != "alt-harmonic" || sigma_spec != "two-pos-one-neg") {
    throw spec_error("oscillate ships with the certified pair --series alt-harmonic "
                     "--sigma two-pos-one-neg");
  }
  auto delta = parse_rational(delta_spec);
  if (!delta || sign(*delta) <= 0) throw spec_error("--delta must be a positive rational");
  if (blocks < 1) throw spec_error("--blocks must be >= 1");
  const ConvergentSeries a = zoo::alt_harmonic();
  const Permutation sigma = zoo::two_pos_one_neg();
  const ConvergentSeries re = zoo::two_pos_one_neg_alt_harmonic();
  const BracketedSeries br{bracket_series(re.terms, [](Index k) { return k; }), re.modulus};
  OscillationWitness w = build_oscillation(a, sigma, br, *delta, Side::s_below_t);
  std::cout << "s_hat," << to_string(w.s_hat()) << "\n";
  std::cout << "t_hat," << to_string(w.t_hat()) << "\n";
  std::cout << "bound,delta/3," << to_string(*delta / 3) << "\n";
  std::cout << "i,k_i,f_k_i,block_sum,pass\n";
  for (Index i = 1; i <= blocks; ++i) {
    const Rational b = w.block_sum(i);  // throws modulus_violation on a failed bound
    std::cout << i << ',' << w.k(i) << ',' << w.f_at(i) << ',' << to_string(b) << ",1\n";
  }
}

void cmd_bdn_build(const std::string& set_spec, Index terms, const std::string& out_path) {
  if (terms < 0) throw spec_error("--terms must be >= 0");
  PseudoboundedSet set = parse_set_spec(set_spec);
  BdnSeries b = bdn_series(set);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  out << "n,magnitude,signed_term,partial_sum\n";
  RunningSum acc;
  for (Index n = 1; n <= terms; ++n) {
    const Rational t = b.signed_terms.term(n);
    acc.add(t);
    out << n << ',' << to_string(b.magnitudes.term(n)) << ',' << to_string(t) << ','
        << to_string(acc.value()) << "\n";
  }
}

void cmd_bdn_bracket(const std::string& set_spec, const std::string& perm_spec, Index blocks) {
  if (blocks < 1) throw spec_error("--blocks must be >= 1");
  PseudoboundedSet set = parse_set_spec(set_spec);
  RealizedSeries dummy{"bdn", {bdn_series(set).signed_terms, bdn_series(set).modulus},
                       std::nullopt, std::nullopt, nullptr};
  Permutation sigma = parse_perm_spec(perm_spec, dummy);
  WeakBracketing wb = weak_bracketing(set, sigma);
  std::cout << "i,k_i,j_k_i,n_k_i,block_sum,bound,pass\n";
  for (Index i = 1; i <= blocks; ++i) {
    const Index k = wb.selected_k(i);
    const Rational sum = wb.selected_block_sum(i);  // throws on a failed bound
    std::cout << i << ',' << k << ',' << wb.j_at(k) << ',' << wb.n_at(k) << ',' << to_string(sum)
              << ',' << to_string(pow2(static_cast<long>(-k))) << ",1\n";
  }
}

void cmd_bdn_bound(const std::string& set_spec, Index n_exp, Index range) {
  PseudoboundedSet set = parse_set_spec(set_spec);
  std::cout << bounded_from_convergence(set, n_exp, range) << "\n";
}

void cmd_instrument_scan(const std::string& series_spec, const std::string& eps_spec, Index fuel,
                         Index upto) {
  auto eps = parse_rational(eps_spec);
  if (!eps) throw spec_error("--eps must be a rational");
  if (upto < 1 || fuel < 1) throw spec_error("--upto and --fuel must be >= 1");
  RealizedSeries rs = parse_series_spec(series_spec);
  PlusTailPredicate p(rs.series.terms, *eps);
  std::cout << "n,status,m\n";
  for (Index n = 1; n <= upto; ++n) {
    const SMembership m = kappa(p, n, fuel);
    std::cout << n << ',' << (m.is_member() ? "member" : "unknown") << ',' << m.value << "\n";
  }
}

void cmd_instrument_sigma(const std::string& series_spec, const std::string& eps_spec,
                          const std::string& sseq, Index fuel, Index upto) {
  auto eps = parse_rational(eps_spec);
  if (!eps) throw spec_error("--eps must be a rational");
  if (upto < 1 || fuel < 1) throw spec_error("--upto and --fuel must be >= 1");
  RealizedSeries rs = parse_series_spec(series_spec);
  const std::string spec = "sigma-from-lambda:eps=" + eps_spec + ",upto=" + std::to_string(upto) +
                           ",fuel=" + std::to_string(fuel) + ",sseq=" + sseq;
  Permutation sigma = parse_perm_spec(spec, rs);
  std::cout << "sigma_prefix:";
  for (Index n = 1; n <= upto; ++n) std::cout << ' ' << sigma.image(n);
  std::cout << "\n";
  // Rebuild the lambda stream to list intervals and their block witnesses.
  PlusTailPredicate p(rs.series.terms, *eps);
  auto entry = [p, fuel, sseq](Index n) {
    const Index value = n == 1 ? 1 : (sseq == "ones" ? 1 : n * n);
    const SMembership m = kappa(p, value, fuel);
    if (!m.is_member()) throw spec_error("no membership witness for " + std::to_string(value));
    return SSeqEntry{value, m.value};
  };
  LambdaStream ls = lambda_stream(p, entry);
  std::cout << "intervals: lo,hi,j,k,block_sum\n";
  for (const BadInterval& iv : bad_intervals(ls, upto)) {
    const auto [j, k] = verify_sig1(rs.series.terms, sigma, iv, *eps);
    std::cout << iv.lo << ',' << iv.hi << ',' << j << ',' << k << ','
              << to_string(window_sum(apply_permutation(rs.series.terms, sigma), j + 1, k)) << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"serex: exact rational series rearrangement laboratory"};
  app.require_subcommand(1);

  std::string series, perm, target, out_path, f_spec, set_spec, delta, eps, sseq = "squares";
  Index terms = 0, blocks = 8, n_exp = 1, range = 10, fuel = 100000, upto = 20;
  bool with_float = false;

  auto* sums = app.add_subcommand("sums", "CSV of n,term,partial_sum");
  sums->add_option("--series", series)->required();
  sums->add_option("--terms", terms)->required();
  sums->add_option("--perm", perm);
  sums->add_option("--out", out_path);
  sums->add_flag("--float", with_float, "append a decimal convenience column");

  auto* re = app.add_subcommand("rearrange", "greedy rearrangement to a target");
  re->add_option("--series", series)->required();
  re->add_option("--target", target, "rational, +inf, or -inf")->required();
  re->add_option("--terms", terms)->required();

  auto* brk = app.add_subcommand("bracket", "block sums and telescoping check");
  brk->add_option("--series", series)->required();
  brk->add_option("--f", f_spec, "identity|dyadic|odd")->required();
  brk->add_option("--blocks", blocks);

  auto* osc = app.add_subcommand("oscillate", "oscillating permutation blocks");
  osc->add_option("--series", series)->required();
  osc->add_option("--sigma", perm)->required();
  osc->add_option("--delta", delta)->required();
  osc->add_option("--blocks", blocks);

  auto* bdn = app.add_subcommand("bdn", "pseudobounded-set constructions");
  bdn->require_subcommand(1);
  auto* bdn_build = bdn->add_subcommand("build", "CSV of the signed series");
  bdn_build->add_option("--set", set_spec)->required();
  bdn_build->add_option("--terms", terms)->required();
  bdn_build->add_option("--out", out_path);
  auto* bdn_bracket = bdn->add_subcommand("bracket", "weak bracketing blocks");
  bdn_bracket->add_option("--set", set_spec)->required();
  bdn_bracket->add_option("--perm", perm)->required();
  bdn_bracket->add_option("--blocks", blocks);
  auto* bdn_bound = bdn->add_subcommand("bound", "boundedness from convergence");
  bdn_bound->add_option("--set", set_spec)->required();
  bdn_bound->add_option("--n", n_exp)->required();
  bdn_bound->add_option("--range", range)->required();

  auto* inst = app.add_subcommand("instrument", "plus-tail predicate machinery");
  inst->require_subcommand(1);
  auto* scan = inst->add_subcommand("s-scan", "S-membership table");
  scan->add_option("--series", series)->required();
  scan->add_option("--eps", eps)->required();
  scan->add_option("--fuel", fuel)->required();
  scan->add_option("--upto", upto)->required();
  auto* sg = inst->add_subcommand("sigma", "positives-first permutation and witnesses");
  sg->add_option("--series", series)->required();
  sg->add_option("--eps", eps)->required();
  sg->add_option("--upto", upto)->required();
  sg->add_option("--fuel", fuel);
  sg->add_option("--sseq", sseq, "ones|squares");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are spec errors
  }

  if (sums->parsed()) cmd_sums(series, terms, perm, out_path, with_float);
  if (re->parsed()) cmd_rearrange(series, target, terms);
  if (brk->parsed()) cmd_bracket(series, f_spec, blocks);
  if (osc->parsed()) cmd_oscillate(series, perm, delta, blocks);
  if (bdn_build->parsed()) cmd_bdn_build(set_spec, terms, out_path);
  if (bdn_bracket->parsed()) cmd_bdn_bracket(set_spec, perm, blocks);
  if (bdn_bound->parsed()) cmd_bdn_bound(set_spec, n_exp, range);
  if (scan->parsed()) cmd_instrument_scan(series, eps, fuel, upto);
  if (sg->parsed()) cmd_instrument_sigma(series, eps, sseq, fuel, upto);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const serex::check_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const serex::spec_error& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
