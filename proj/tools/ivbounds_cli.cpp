// Command-line interface: sharp treatment-effect bounds and complete
// falsification tests for discrete instrumental-variable models.
//
// Exit codes: 0 success/compatible, 2 schema or parameter error,
// 3 falsified or infeasible law, 4 oracle cap exceeded, 5 comparison
// mismatch.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivbounds/bench.hpp"
#include "ivbounds/ivbounds.hpp"

using namespace ivb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitFalsified = 3;
constexpr int kExitCap = 4;
constexpr int kExitMismatch = 5;

struct GlobalOpts {
  std::string format = "text";
  unsigned threads = 1;
  bool use_float = false;
  std::uint64_t seed = 42;
};

std::string fmt_value(const Rational& r, const GlobalOpts& g) {
  if (!g.use_float) return to_fraction_string(r);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", to_double(r));
  return buf;
}

Json witness_json(const Signature& s) {
  Json j;
  j["family"] = family_name(s.family);
  if (s.family == SignatureFamily::S2)
    j["t"] = nullptr;
  else
    j["t"] = s.t;
  j["bits"] = s.display_string();
  return j;
}

Json violation_json(const Violation& v, const GlobalOpts& g) {
  Json j;
  j["family"] = ineq_family_name(v.ineq.family);
  if (v.ineq.family == IneqFamily::Eq14) {
    j["y_prime"] = v.ineq.y_prime;
    j["j_prime"] = v.ineq.j_prime;
    j["j_seq"] = v.ineq.j_seq;
  } else {
    Json t = Json::array();
    for (std::size_t k = 0; k < 64; ++k)
      if ((v.ineq.T >> k) & 1u) t.push_back(k);
    j["T"] = t;
  }
  j["expr"] = format_linear_expr(v.ineq.expr, ExprStyle::text) + " <= 0";
  j["slack"] = fmt_value(v.slack, g);
  return j;
}

void print_violations_text(const FalsificationReport& rep, const GlobalOpts& g) {
  for (const auto& f : rep.axiom_failures)
    std::printf("axiom violated: %s (slack %s)\n", f.description.c_str(),
                fmt_value(f.slack, g).c_str());
  for (const auto& v : rep.violations) {
    std::string line = format_linear_expr(v.ineq.expr, ExprStyle::text);
    if (v.ineq.family != IneqFamily::Eq14)
      line = format_linear_expr(reduced_form(v.ineq), ExprStyle::text) + " <= 0   [raw: " + line +
             " <= 0]";
    else
      line += " <= 0";
    std::printf("violated (%s): %s  slack %s\n", v.ineq.id().c_str(), line.c_str(),
                fmt_value(v.slack, g).c_str());
  }
}

Json report_json(const FalsificationReport& rep, const GlobalOpts& g) {
  Json j;
  j["verdict"] = rep.falsified ? "falsified" : "compatible";
  j["complete"] = rep.complete;
  Json fails = Json::array();
  for (const auto& f : rep.axiom_failures)
    fails.push_back({{"axiom", f.description}, {"slack", fmt_value(f.slack, g)}});
  j["axiom_failures"] = fails;
  Json viols = Json::array();
  for (const auto& v : rep.violations) viols.push_back(violation_json(v, g));
  j["violations"] = viols;
  return j;
}

int cmd_bounds(const std::string& input, const GlobalOpts& g) {
  ObservedLaw law = to_observed_law(load_input_document(input));
  const FalsificationReport rep = law.ell() == 2 ? falsification_test(law) : multival_test(law);
  if (rep.falsified) {
    if (g.format == "json") {
      Json j = report_json(rep, g);
      j["bounds"] = nullptr;
      std::cout << j.dump(2) << "\n";
    } else {
      std::printf("law is falsified; bounds are undefined\n");
      print_violations_text(rep, g);
    }
    return kExitFalsified;
  }

  if (law.ell() == 2) {
    const BoundResult b = ate_bounds(law, g.threads);
    if (g.format == "json") {
      Json j;
      j["verdict"] = "compatible";
      j["sharp"] = true;
      j["bounds"] = {{"lower", fmt_value(b.lower, g)}, {"upper", fmt_value(b.upper, g)}};
      Json lw = Json::array(), uw = Json::array();
      for (const auto& s : b.lower_witnesses) lw.push_back(witness_json(s));
      for (const auto& s : b.upper_witnesses) uw.push_back(witness_json(s));
      j["witnesses"] = {{"lower", lw}, {"upper", uw}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::printf("lower: %s\nupper: %s\n", fmt_value(b.lower, g).c_str(),
                  fmt_value(b.upper, g).c_str());
      std::printf("lower witnesses:");
      for (const auto& s : b.lower_witnesses)
        std::printf(" %s[%s]", family_name(s.family), s.display_string().c_str());
      std::printf("\nupper witnesses:");
      for (const auto& s : b.upper_witnesses)
        std::printf(" %s[%s]", family_name(s.family), s.display_string().c_str());
      std::printf("\n");
    }
    return kExitOk;
  }

  // Multi-arm route: valid bounds from the exhibited family, not sharp.
  const auto lo = multival_lower_bound(law);
  const auto up = multival_lower_bound(law.conjugate());
  if (g.format == "json") {
    Json j;
    j["verdict"] = "compatible";
    j["sharp"] = false;
    j["note"] = "multi-arm family: bounds are valid but not claimed sharp";
    j["bounds"] = {{"lower", lo ? Json(fmt_value(*lo, g)) : Json(nullptr)},
                   {"upper", up ? Json(fmt_value(Rational(-*up), g)) : Json(nullptr)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("note: ell > 2, bounds from the exhibited dual family (valid, not sharp)\n");
    std::printf("lower: %s\nupper: %s\n", lo ? fmt_value(*lo, g).c_str() : "-inf",
                up ? fmt_value(Rational(-*up), g).c_str() : "inf");
  }
  return kExitOk;
}

int cmd_test(const std::string& input, const GlobalOpts& g) {
  ObservedLaw law = to_observed_law(load_input_document(input));
  const FalsificationReport rep = law.ell() == 2 ? falsification_test(law) : multival_test(law);
  if (g.format == "json") {
    std::cout << report_json(rep, g).dump(2) << "\n";
  } else {
    std::printf("verdict: %s\n", rep.falsified ? "falsified" : "compatible");
    std::printf("complete: %s\n", rep.complete ? "true" : "false");
    print_violations_text(rep, g);
  }
  return rep.falsified ? kExitFalsified : kExitOk;
}

OutcomeSupport support_from_option(std::size_t n, const std::string& gammas_csv) {
  if (gammas_csv.empty()) return OutcomeSupport::iota(n);
  std::vector<Rational> g;
  std::string cur;
  for (char c : gammas_csv + ",") {
    if (c == ',') {
      if (!cur.empty()) g.push_back(parse_rational(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (g.size() != n) throw ShapeMismatch("--gammas must list exactly n values");
  return OutcomeSupport(std::move(g));
}

int cmd_emit(const std::string& kind, std::size_t n, const std::string& gammas_csv,
             std::size_t ell, bool reduced, const GlobalOpts& g) {
  const OutcomeSupport sup = support_from_option(n, gammas_csv);
  const ExprStyle style = g.format == "latex" ? ExprStyle::latex : ExprStyle::text;

  if (kind == "bounds") {
    std::vector<LinearExpr> lower, upper;
    bool sharp = ell == 2;
    if (ell == 2) {
      lower = emit_bound_expressions(sup, BoundSideKind::Lower);
      upper = emit_bound_expressions(sup, BoundSideKind::Upper);
    } else {
      enumerate_multival_vertices(sup, ell, [&](const MultivalVertexParams&, const DualVector& w) {
        LinearExpr lo(n, ell), hi(n, ell);
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t d = 0; d < 2; ++d)
            for (std::size_t z = 0; z < ell; ++z) {
              lo.at(y, d, z) = w.at(y, d, z);
              hi.at(y, d, z) = -w.at(y, 1 - d, z);
            }
        lower.push_back(std::move(lo));
        upper.push_back(std::move(hi));
      });
    }
    if (g.format == "json") {
      Json j;
      j["n"] = n;
      j["ell"] = ell;
      j["sharp"] = sharp;
      Json lo = Json::array(), hi = Json::array();
      for (const auto& e : lower) lo.push_back(linear_expr_to_json(e));
      for (const auto& e : upper) hi.push_back(linear_expr_to_json(e));
      j["lower_terms"] = lo;
      j["upper_terms"] = hi;
      std::cout << j.dump(2) << "\n";
    } else if (g.format == "latex") {
      std::cout << format_bounds_latex(lower, upper);
    } else {
      if (!sharp) std::printf("# valid but not sharp (multi-arm family)\n");
      std::printf("lower-bound terms (ATE >= max of):\n");
      for (const auto& e : lower) std::printf("  %s\n", format_linear_expr(e, style).c_str());
      std::printf("upper-bound terms (ATE <= min of):\n");
      for (const auto& e : upper) std::printf("  %s\n", format_linear_expr(e, style).c_str());
    }
    return kExitOk;
  }

  if (kind != "inequalities") throw ShapeMismatch("emit kind must be 'bounds' or 'inequalities'");
  std::vector<IvInequality> ineqs;
  if (ell == 2)
    sharp_inequalities(n, [&](IvInequality q) { ineqs.push_back(std::move(q)); });
  else
    enumerate_multival_inequalities(n, ell, [&](IvInequality q) { ineqs.push_back(std::move(q)); });
  if (reduced && ell != 2) throw ShapeMismatch("--reduced requires ell = 2");

  if (g.format == "json") {
    Json arr = Json::array();
    for (const auto& q : ineqs) {
      Json j;
      j["family"] = ineq_family_name(q.family);
      if (q.family == IneqFamily::Eq14) {
        j["y_prime"] = q.y_prime;
        j["j_prime"] = q.j_prime;
        j["j_seq"] = q.j_seq;
      } else {
        Json t = Json::array();
        for (std::size_t k = 0; k < 64; ++k)
          if ((q.T >> k) & 1u) t.push_back(k);
        j["T"] = t;
      }
      j["expr"] = linear_expr_to_json(reduced ? reduced_form(q) : q.expr);
      arr.push_back(j);
    }
    Json out;
    out["n"] = n;
    out["ell"] = ell;
    out["complete"] = ell == 2;
    out["inequalities"] = arr;
    std::cout << out.dump(2) << "\n";
  } else {
    if (ell != 2) std::printf("# necessary implications only (ell > 2)\n");
    for (const auto& q : ineqs) {
      const LinearExpr e = reduced ? reduced_form(q) : q.expr;
      if (reduced) {
        LinearExpr lhs = e;
        lhs.constant = 0;
        std::printf("%s <= 1    [%s]\n", format_linear_expr(lhs, style).c_str(), q.id().c_str());
      } else {
        std::printf("%s <= 0    [%s]\n", format_linear_expr(e, style).c_str(), q.id().c_str());
      }
    }
  }
  return kExitOk;
}

int cmd_count(std::size_t n_min, std::size_t n_max, std::size_t ell, bool verify,
              const GlobalOpts& g) {
  bool all_ok = true;
  Json rows = Json::array();
  if (g.format != "json")
    std::printf("%4s %16s %16s%s\n", "n", ell == 2 ? "bound terms" : "family vertices",
                "inequalities", verify ? "   enumerated" : "");
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const std::uint64_t vc = ell == 2 ? count_signatures(n) : count_multival_vertices(n, ell);
    const std::uint64_t ic =
        ell == 2 ? sharp_inequality_count(n) : count_multival_inequalities(n, ell);
    std::uint64_t ve = 0, ie = 0;
    bool ok = true;
    if (verify) {
      if (ell == 2) {
        for_each_signature(n, [&](const Signature&) { ++ve; });
        sharp_inequalities(n, [&](const IvInequality&) { ++ie; });
      } else {
        enumerate_multival_vertices(OutcomeSupport::iota(n), ell,
                                    [&](const MultivalVertexParams&, const DualVector&) { ++ve; });
        enumerate_multival_inequalities(n, ell, [&](const IvInequality&) { ++ie; });
      }
      ok = ve == vc && ie == ic;
      all_ok = all_ok && ok;
    }
    if (g.format == "json") {
      Json row = {{"n", n}, {"terms", vc}, {"inequalities", ic}};
      if (verify) row["verified"] = ok;
      rows.push_back(row);
    } else {
      std::printf("%4zu %16llu %16llu", n, (unsigned long long)vc, (unsigned long long)ic);
      if (verify) std::printf("   %s", ok ? "ok" : "MISMATCH");
      std::printf("\n");
    }
  }
  if (g.format == "json") std::cout << rows.dump(2) << "\n";
  return all_ok ? kExitOk : 1;
}

int cmd_oracle(const std::string& mode, const std::string& input, bool compare,
               const GlobalOpts& g) {
  ObservedLaw law = to_observed_law(load_input_document(input));
  if (mode == "bounds") {
    std::pair<Rational, Rational> o;
    try {
      o = oracle_ate_bounds(law);
    } catch (const InfeasibleLaw& e) {
      std::fprintf(stderr, "%s\n", e.what());
      return kExitFalsified;
    }
    if (g.format == "json") {
      Json j = {{"lower", fmt_value(o.first, g)}, {"upper", fmt_value(o.second, g)}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::printf("oracle lower: %s\noracle upper: %s\n", fmt_value(o.first, g).c_str(),
                  fmt_value(o.second, g).c_str());
    }
    if (compare) {
      if (law.ell() != 2) throw ShapeMismatch("--compare requires ell = 2");
      const BoundResult b = ate_bounds(law, g.threads);
      if (b.lower != o.first || b.upper != o.second) {
        std::fprintf(stderr, "MISMATCH: enumeration gives [%s, %s]\n",
                     to_fraction_string(b.lower).c_str(), to_fraction_string(b.upper).c_str());
        return kExitMismatch;
      }
      std::fprintf(stderr, "enumeration path agrees exactly\n");
    }
    return kExitOk;
  }
  if (mode != "feasible") throw ShapeMismatch("oracle mode must be 'bounds' or 'feasible'");
  const bool ok = oracle_feasible(law.values(), law.n(), law.ell());
  if (g.format == "json") {
    std::cout << Json{{"feasible", ok}}.dump(2) << "\n";
  } else {
    std::printf("feasible: %s\n", ok ? "true" : "false");
  }
  if (compare) {
    if (law.ell() != 2) throw ShapeMismatch("--compare requires ell = 2");
    const bool enum_ok = !falsification_test(law).falsified;
    if (enum_ok != ok) {
      std::fprintf(stderr, "MISMATCH: falsification test says %s\n",
                   enum_ok ? "compatible" : "falsified");
      return kExitMismatch;
    }
    std::fprintf(stderr, "falsification test agrees\n");
  }
  return ok ? kExitOk : kExitFalsified;
}

int cmd_gen(std::size_t n, std::size_t ell, std::uint64_t seed, const std::string& output,
            std::optional<double> corrupt_mag, const GlobalOpts&) {
  const FullDataLaw q = random_full_data_law(n, ell, seed);
  const ObservedLaw law = marginalize(q);
  InputDocument doc = from_observed_law(law);
  doc.meta = Json{{"generator", {{"n", n}, {"ell", ell}, {"seed", seed}}}};
  save_input_document(doc, output);
  std::fprintf(stderr, "wrote %s\n", output.c_str());

  if (corrupt_mag) {
    // Move a fraction of one cell's mass to another cell of the same arm.
    const Rational mag = parse_rational(std::to_string(*corrupt_mag));
    std::mt19937_64 eng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<Rational> p = law.values();
    const std::size_t z = eng() % ell, cells = 2 * n;
    std::size_t from = eng() % cells, to = eng() % cells;
    while (to == from) to = eng() % cells;
    auto idx = [&](std::size_t c) { return ydz_index(c % n, c / n, z, ell); };
    const Rational delta = p[idx(from)] * mag;
    p[idx(from)] -= delta;
    p[idx(to)] += delta;
    InputDocument cdoc = from_observed_law(ObservedLaw(law.support(), ell, std::move(p)));
    cdoc.meta = doc.meta;
    cdoc.meta["generator"]["corrupt"] = *corrupt_mag;
    std::string cpath = output;
    const auto dot = cpath.rfind(".json");
    if (dot != std::string::npos)
      cpath.insert(dot, ".corrupt");
    else
      cpath += ".corrupt";
    save_input_document(cdoc, cpath);
    std::fprintf(stderr, "wrote %s\n", cpath.c_str());
  }
  return kExitOk;
}

int cmd_bench(std::size_t n_min, std::size_t n_max, unsigned reps, const std::string& output,
              const GlobalOpts& g) {
  if (n_max > 12) throw ShapeMismatch("bench supports n up to 12");
  const auto records = run_bench(n_min, n_max, reps, g.seed);
  const std::string csv = bench_csv(records);
  std::cout << csv;
  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) throw ShapeMismatch("cannot write " + output);
    out << csv;
    std::fprintf(stderr, "wrote %s\n", output.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sharp treatment-effect bounds and falsification tests for discrete IV models"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--format", g.format, "output format: text, json, or latex (emit only)")
      ->check(CLI::IsMember({"text", "json", "latex"}));
  app.add_option("--threads", g.threads, "worker threads for the enumeration reductions");
  app.add_flag("--float", g.use_float, "display values as floating point (computation stays exact)");
  app.add_flag("--exact", [](std::int64_t) {}, "display exact rationals (default)");
  app.add_option("--seed", g.seed, "seed for gen and bench");

  std::string input, output, kind, mode, gammas;
  std::size_t n = 2, ell = 2, n_min = 2, n_max = 9;
  unsigned reps = 3;
  bool compare = false, verify = false, reduced = false;
  std::optional<double> corrupt_mag;

  auto* bounds = app.add_subcommand("bounds", "sharp ATE bounds with witnesses");
  bounds->fallthrough();
  bounds->add_option("input", input, "law document (JSON)")->required();

  auto* test = app.add_subcommand("test", "falsification test with exact slacks");
  test->fallthrough();
  test->add_option("input", input, "law document (JSON)")->required();

  auto* emit = app.add_subcommand("emit", "symbolic bound terms or inequalities");
  emit->fallthrough();
  emit->add_option("kind", kind, "bounds | inequalities")->required();
  emit->add_option("--n", n, "outcome support size")->required();
  emit->add_option("--gammas", gammas, "comma-separated outcome values (default 0..n-1)");
  emit->add_option("--ell", ell, "instrument arms (default 2)");
  emit->add_flag("--reduced", reduced, "emit the normalized compact inequality form");

  auto* count = app.add_subcommand("count", "closed-form term counts");
  count->fallthrough();
  count->add_option("--n-min", n_min, "smallest support size");
  count->add_option("--n-max", n_max, "largest support size");
  count->add_option("--ell", ell, "instrument arms (default 2)");
  count->add_flag("--verify", verify, "also enumerate and compare");

  auto* oracle = app.add_subcommand("oracle", "exact LP ground truth");
  oracle->fallthrough();
  oracle->add_option("mode", mode, "bounds | feasible")->required();
  oracle->add_option("input", input, "law document (JSON)")->required();
  oracle->add_flag("--compare", compare, "also run the enumeration path and require equality");

  auto* gen = app.add_subcommand("gen", "write a seeded feasible law document");
  gen->fallthrough();
  gen->add_option("--n", n, "outcome support size")->required();
  gen->add_option("--ell", ell, "instrument arms")->required();
  gen->add_option("-o,--output", output, "output path")->required();
  gen->add_option("--corrupt", corrupt_mag,
                  "also write a perturbed variant (fraction of mass to move)");

  auto* bench = app.add_subcommand("bench", "output-sensitivity benchmark (CSV)");
  bench->fallthrough();
  bench->add_option("--n-min", n_min, "smallest support size");
  bench->add_option("--n-max", n_max, "largest support size");
  bench->add_option("--reps", reps, "repetitions per size (best run is kept)");
  bench->add_option("-o,--output", output, "also write the CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bounds->parsed()) return cmd_bounds(input, g);
    if (test->parsed()) return cmd_test(input, g);
    if (emit->parsed()) return cmd_emit(kind, n, gammas, ell, reduced, g);
    if (count->parsed()) return cmd_count(n_min, n_max, ell, verify, g);
    if (oracle->parsed()) return cmd_oracle(mode, input, compare, g);
    if (gen->parsed()) return cmd_gen(n, ell, g.seed, output, corrupt_mag, g);
    if (bench->parsed()) return cmd_bench(n_min, n_max, reps, output, g);
  } catch (const OracleCapExceeded& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCap;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSchema;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSchema;
  }
  return kExitOk;
}
