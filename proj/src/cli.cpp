#include "liederiv/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <algorithm>
#include <sstream>

#include "liederiv/random.hpp"
#include "liederiv/serialize.hpp"
#include "liederiv/text.hpp"

namespace liederiv {

namespace {

using json = nlohmann::json;

struct Outcome {
  int code = 0;
  std::string text;
  json result;
  std::vector<Witness> witnesses;
};

json witness_json(const Witness& w) {
  return {{"trial", w.trial}, {"a", w.a}, {"b", w.b}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"note", w.note}};
}

std::string witness_text(const Witness& w) {
  std::string s = "  witness (trial " + std::to_string(w.trial) + "): a = " + w.a;
  if (!w.b.empty()) s += ", b = " + w.b;
  if (!w.lhs.empty() || !w.rhs.empty()) s += "\n    lhs = " + w.lhs + "\n    rhs = " + w.rhs;
  if (!w.note.empty()) s += "\n    " + w.note;
  return s + "\n";
}

Outcome plain(std::string s) {
  Outcome o;
  o.result = s;
  o.text = std::move(s) + "\n";
  return o;
}

// Derivation parameters shared by derive, normalize, check-derivation, group, generator-check.
struct Params {
  std::string family = "d";
  std::string Y = "0", P = "0", kappa = "0", lambda = "0", omega = "0", density = "0";

  void attach(CLI::App* sub, bool with_square = false) {
    std::vector<std::string> fams{"d1", "s", "d"};
    if (with_square) fams.push_back("square");
    sub->add_option("--family", family, "d1, s or d")->required()->check(CLI::IsMember(fams));
    sub->add_option("--Y", Y, "vector field (d1)");
    sub->add_option("--P", P, "symbol (s) or operator (d)");
    sub->add_option("--kappa", kappa);
    sub->add_option("--lambda", lambda);
    sub->add_option("--omega", omega, "closed 1-form, e.g. x2*dx1 + x1*dx2");
    sub->add_option("--density", density, "weight g of the density e^g |dx| (d1)");
  }

  D1Derivation d1(int n, Mode m) const {
    return {parse_operator(Y, n, m), Scalar::parse(kappa, m), Scalar::parse(lambda, m), parse_oneform(omega, n, m),
            Divergence{parse_symbol(density, n, m)}};
  }
  SDerivation s(int n, Mode m) const { return {parse_symbol(P, n, m), Scalar::parse(kappa, m), parse_oneform(omega, n, m)}; }
  DDerivation d(int n, Mode m) const { return {parse_operator(P, n, m), parse_oneform(omega, n, m)}; }
};

std::string report_text(bool passed, std::size_t failures, std::size_t trials, const std::string& what) {
  return std::string(passed ? "PASS" : "FAIL") + " " + what + ": " + std::to_string(trials - failures) + "/" +
         std::to_string(trials) + " passed\n";
}

template <class Elem>
Elem parse_elem(const std::string& text, int n, Mode m) {
  if constexpr (std::is_same_v<Elem, WeylOp>)
    return parse_operator(text, n, m);
  else
    return parse_symbol(text, n, m);
}

}  // namespace

CliOutput run_cli(std::vector<std::string> args) {
  CliOutput output;
  const std::vector<std::string> echo = args;

  CLI::App app{"Lie algebras of differential operators on R^n with polynomial data", "liederiv"};
  app.require_subcommand(1);
  app.fallthrough();
  int dim = 1;
  bool as_json = false, approx = false;
  std::uint64_t seed = 1;
  app.add_option("--dim", dim, "ambient dimension n")->check(CLI::Range(1, 3));
  app.add_flag("--json", as_json, "structured output");
  app.add_flag("--approx", approx, "floating-point coefficients instead of exact rationals");
  app.add_option("--seed", seed, "seed for random probes");

  Outcome outcome;
  std::function<Outcome()> action;
  auto mode = [&] { return approx ? Mode::Approx : Mode::Exact; };

  // bracket
  auto* bracket = app.add_subcommand("bracket", "Poisson bracket of symbols or commutator of operators");
  std::vector<std::string> sym_pair, op_pair;
  auto* o_sym = bracket->add_option("--symbols", sym_pair)->expected(2);
  auto* o_ops = bracket->add_option("--ops", op_pair)->expected(2);
  o_sym->excludes(o_ops);
  bracket->callback([&] {
    action = [&] {
      if (!sym_pair.empty())
        return plain(to_string(poisson_bracket(parse_symbol(sym_pair[0], dim, mode()), parse_symbol(sym_pair[1], dim, mode()))));
      if (op_pair.empty()) throw PreconditionError("bracket needs --symbols A B or --ops A B");
      return plain(to_string(weyl_commutator(parse_operator(op_pair[0], dim, mode()), parse_operator(op_pair[1], dim, mode()))));
    };
  });

  auto* compose_cmd = app.add_subcommand("compose", "composition of two operators");
  std::vector<std::string> comp_args;
  compose_cmd->add_option("operators", comp_args)->expected(2)->required();
  compose_cmd->callback([&] {
    action = [&] {
      return plain(to_string(weyl_compose(parse_operator(comp_args[0], dim, mode()), parse_operator(comp_args[1], dim, mode()))));
    };
  });

  auto* symbol_cmd = app.add_subcommand("symbol", "i-th symbol of an operator (principal symbol by default)");
  std::string sym_op;
  int order = -1;
  symbol_cmd->add_option("operator", sym_op)->required();
  symbol_cmd->add_option("--order", order);
  symbol_cmd->callback([&] {
    action = [&] {
      WeylOp d = parse_operator(sym_op, dim, mode());
      return plain(to_string(order < 0 ? principal_symbol(d) : symbol_of_order(d, order)));
    };
  });

  auto* quantize_cmd = app.add_subcommand("quantize", "standard-ordering quantization p^a -> d^a");
  std::string q_sym;
  quantize_cmd->add_option("symbol", q_sym)->required();
  quantize_cmd->callback([&] { action = [&] { return plain(to_string(quantize_standard(parse_symbol(q_sym, dim, mode())))); }; });

  auto* conj_cmd = app.add_subcommand("conjugate", "C(D) = -D* for the standard density");
  std::string c_op;
  conj_cmd->add_option("operator", c_op)->required();
  conj_cmd->callback([&] { action = [&] { return plain(to_string(conjugation(parse_operator(c_op, dim, mode())))); }; });

  // derive
  auto* derive_cmd = app.add_subcommand("derive", "apply a derivation C to an element");
  Params dp;
  std::string on;
  dp.attach(derive_cmd);
  derive_cmd->add_option("--on", on, "element to act on")->required();
  derive_cmd->callback([&] {
    action = [&] {
      if (dp.family == "d1") return plain(to_string(apply_d1_derivation(dp.d1(dim, mode()), parse_operator(on, dim, mode()))));
      if (dp.family == "s") return plain(to_string(apply_s_derivation(dp.s(dim, mode()), parse_symbol(on, dim, mode()))));
      return plain(to_string(apply_d_derivation(dp.d(dim, mode()), parse_operator(on, dim, mode()))));
    };
  });

  auto* normalize_cmd = app.add_subcommand("normalize", "gauge representative with P vanishing on the zero section");
  Params np;
  np.attach(normalize_cmd);
  normalize_cmd->callback([&] {
    action = [&] {
      if (np.family == "s") {
        SDerivation c = np.s(dim, mode());
        return plain(to_string(normalize_s_pair(c.P, c.kappa, c.omega)));
      }
      if (np.family == "d") {
        DDerivation c = np.d(dim, mode());
        return plain(to_string(normalize_d_pair(c.P, c.omega)));
      }
      throw PreconditionError("d1 derivations have no gauge freedom");
    };
  });

  auto* check_cmd = app.add_subcommand("check-derivation", "C[A,B] = [CA,B] + [A,CB] on random pairs");
  Params cp;
  std::size_t trials = 200;
  unsigned workers = 1;
  int max_order = 3, max_base = 3;
  cp.attach(check_cmd, true);
  check_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
  check_cmd->add_option("--workers", workers)->check(CLI::Range(1u, 64u));
  check_cmd->add_option("--max-order", max_order)->check(CLI::Range(0, 3));
  check_cmd->add_option("--max-degree", max_base)->check(CLI::Range(0, 3));
  check_cmd->callback([&] {
    action = [&] {
      if (mode() != Mode::Exact) throw PreconditionError("check-derivation runs in exact mode");
      CheckOptions opt;
      opt.dim = dim;
      opt.trials = trials;
      opt.seed = seed;
      opt.workers = workers;
      opt.max_order = max_order;
      opt.max_base = max_base;
      DerivationReport rep;
      if (cp.family == "d1") {
        D1Derivation c = cp.d1(dim, mode());
        rep = check_derivation_property([c](const WeylOp& a) { return apply_d1_derivation(c, a); }, Algebra::D1, opt);
      } else if (cp.family == "s") {
        SDerivation c = cp.s(dim, mode());
        rep = check_derivation_property([c](const SymbolPoly& a) { return apply_s_derivation(c, a); }, opt);
      } else if (cp.family == "d") {
        DDerivation c = cp.d(dim, mode());
        rep = check_derivation_property([c](const WeylOp& a) { return apply_d_derivation(c, a); }, Algebra::D, opt);
      } else {
        rep = check_derivation_property([](const SymbolPoly& a) { return a * a; }, opt);
      }
      Outcome o;
      o.code = rep.passed() ? 0 : 3;
      o.text = report_text(rep.passed(), rep.failures, rep.trials, "derivation property (" + cp.family + ")");
      o.result = {{"passed", rep.passed()}, {"trials", rep.trials}, {"failures", rep.failures}};
      o.witnesses = rep.witnesses;
      return o;
    };
  });

  auto* tables_cmd = app.add_subcommand("verify-tables", "commutation tables of the derivation algebras");
  std::size_t table_trials = 20;
  tables_cmd->add_option("--trials", table_trials)->check(CLI::PositiveNumber);
  tables_cmd->callback([&] {
    action = [&] {
      TableReport rep = verify_commutation_tables(dim, table_trials, seed);
      Outcome o;
      o.code = rep.passed() ? 0 : 3;
      o.result = json::array();
      for (const auto& r : rep.relations) {
        o.text += report_text(r.failures == 0, r.failures, r.trials, r.table + ": " + r.relation);
        o.result.push_back({{"table", r.table}, {"relation", r.relation}, {"trials", r.trials}, {"failures", r.failures}});
        o.witnesses.insert(o.witnesses.end(), r.witnesses.begin(), r.witnesses.end());
      }
      return o;
    };
  });

  auto* lemma_cmd = app.add_subcommand("lemma1", "truncated brute force of the filter characterization");
  int li = 0, lk = 1;
  std::string algebra = "d", caps_text = "1,3,3";
  lemma_cmd->add_option("--i", li)->required();
  lemma_cmd->add_option("--k", lk)->required();
  lemma_cmd->add_option("--algebra", algebra)->check(CLI::IsMember({"d", "s", "s-graded"}));
  lemma_cmd->add_option("--caps", caps_text, "n,order,degree (limits 2,3,3)");
  lemma_cmd->callback([&] {
    action = [&] {
      Lemma1Caps caps;
      char c1 = 0, c2 = 0;
      std::istringstream is(caps_text);
      if (!(is >> caps.dim >> c1 >> caps.max_order >> c2 >> caps.max_base) || c1 != ',' || c2 != ',')
        throw SyntaxError("--caps expects n,order,degree", 0);
      Lemma1Algebra alg = algebra == "d" ? Lemma1Algebra::Weyl
                          : algebra == "s" ? Lemma1Algebra::SymbolFiltered
                                           : Lemma1Algebra::SymbolGraded;
      Lemma1Report rep = lemma1_bruteforce(alg, li, lk, caps);
      Outcome o;
      o.code = rep.equal() ? 0 : 3;
      o.text = std::string(rep.equal() ? "PASS" : "FAIL") + " lemma1 " + algebra + " i=" + std::to_string(li) +
               " k=" + std::to_string(lk) + ": computed dim " + std::to_string(rep.lhs_dim) + ", expected dim " +
               std::to_string(rep.rhs_dim) + " (space dim " + std::to_string(rep.space_dim) + ")\n";
      for (const auto& b : rep.lhs_basis) o.text += "  " + b + "\n";
      o.result = {{"equal", rep.equal()},     {"space_dim", rep.space_dim}, {"lhs_dim", rep.lhs_dim},
                  {"rhs_dim", rep.rhs_dim},   {"lhs_in_rhs", rep.lhs_in_rhs}, {"rhs_in_lhs", rep.rhs_in_lhs},
                  {"basis", rep.lhs_basis}};
      return o;
    };
  });

  // flows
  auto* flow_cmd = app.add_subcommand("flow", "Exp(tY) for an affine vector field Y");
  std::string field, t_text = "1", density = "0";
  flow_cmd->add_option("--field", field, "affine vector field, e.g. x2*d1 + d2")->required();
  flow_cmd->add_option("--t", t_text);
  flow_cmd->callback([&] {
    action = [&] {
      FlowField Y = FlowField::from_vector_field(parse_operator(field, dim, mode()));
      return plain(to_string(flow_at(Y, Scalar::parse(t_text, mode()))));
    };
  });

  auto* jac_cmd = app.add_subcommand("jacobian", "J(phi) = e^{g o phi - g} |det A|");
  std::string map_text;
  jac_cmd->add_option("--map", map_text, "affine{A = [[...]]; b = [...]}")->required();
  jac_cmd->add_option("--density", density);
  jac_cmd->callback([&] {
    action = [&] {
      Jacobian j = jacobian_cocycle(parse_affine(map_text, dim, mode()), Divergence{parse_symbol(density, dim, mode())});
      Outcome o;
      std::string e = to_string(j.exponent);
      o.text = (j.exponent.is_zero() ? "" : "exp(" + e + ") * ") + j.factor.str() + "\n";
      o.result = {{"exponent", e}, {"factor", j.factor.str()}};
      return o;
    };
  });

  auto* divflow_cmd = app.add_subcommand("div-flow", "Div(Exp(tY)) against the integral of div Y along the flow");
  divflow_cmd->add_option("--field", field)->required();
  divflow_cmd->add_option("--t", t_text);
  divflow_cmd->add_option("--density", density);
  divflow_cmd->callback([&] {
    action = [&] {
      FlowField Y = FlowField::from_vector_field(parse_operator(field, dim, mode()));
      Scalar t = Scalar::parse(t_text, mode());
      Divergence dv{parse_symbol(density, dim, mode())};
      SymbolPoly lhs = div_of_flow(Y, t, dv).value();
      SymbolPoly rhs = div_flow_integral(Y, t, dv);
      bool ok = mode() == Mode::Exact ? lhs == rhs : max_coefficient_distance(lhs, rhs) <= 1e-10;
      Outcome o;
      o.code = ok ? 0 : 3;
      o.text = to_string(lhs) + "\n";
      if (!ok) o.text += "integral formula disagrees: " + to_string(rhs) + "\n";
      o.result = {{"div", to_string(lhs)}, {"integral", to_string(rhs)}, {"agree", ok}};
      return o;
    };
  });

  auto* group_cmd = app.add_subcommand("group", "automorphism Phi_t of the one-parameter group generated by C");
  Params gp;
  gp.attach(group_cmd);
  group_cmd->add_option("--t", t_text);
  group_cmd->add_option("--on", on, "optional element to apply Phi_t to");
  group_cmd->callback([&] {
    action = [&] {
      Scalar t = Scalar::parse(t_text, mode());
      auto finish = [&](const auto& g, auto apply) {
        using Aut = std::decay_t<decltype(std::get<0>(g))>;
        if (const auto* bad = std::get_if<NotIntegrable>(&g)) {
          Outcome o;
          o.code = 2;
          o.text = "NotIntegrable: " + bad->reason + "\n";
          o.result = {{"not_integrable", bad->reason}};
          return o;
        }
        const Aut& a = std::get<Aut>(g);
        if (on.empty()) return plain(to_string(a));
        return plain(apply(a));
      };
      if (gp.family == "d1")
        return finish(one_param_group_d1(gp.d1(dim, mode()), t),
                      [&](const AutD1& a) { return to_string(apply_aut_d1(a, parse_operator(on, dim, mode()))); });
      if (gp.family == "s")
        return finish(one_param_group_s(gp.s(dim, mode()), t),
                      [&](const AutS& a) { return to_string(apply_aut_s(a, parse_symbol(on, dim, mode()))); });
      return finish(one_param_group_d(gp.d(dim, mode()), t),
                    [&](const AutD& a) { return to_string(apply_aut_d(a, parse_operator(on, dim, mode()))); });
    };
  });

  auto* gen_cmd = app.add_subcommand("generator-check", "d/dt Phi_t at 0 against C on random probes");
  Params gcp;
  std::size_t probes = 10;
  gcp.attach(gen_cmd);
  gen_cmd->add_option("--probes", probes)->check(CLI::PositiveNumber);
  gen_cmd->callback([&] {
    action = [&] {
      // Probes and parameters are read exactly; the regime decides how Φ_t is evaluated.
      RandomSource rng(seed);
      GeneratorReport rep;
      if (gcp.family == "s") {
        SDerivation c = gcp.s(dim, mode());
        std::vector<SymbolPoly> ps;
        for (std::size_t k = 0; k < probes; ++k) ps.push_back(rng.symbol(dim, 3, 2, 4, mode()));
        rep = generator_check(family_s(c), [c](const SymbolPoly& a) { return apply_s_derivation(c, a); }, ps, mode());
      } else if (gcp.family == "d1") {
        D1Derivation c = gcp.d1(dim, mode());
        std::vector<WeylOp> ps;
        for (std::size_t k = 0; k < probes; ++k) ps.push_back(rng.first_order(dim, 2, 4, mode()));
        rep = generator_check(family_d1(c), [c](const WeylOp& a) { return apply_d1_derivation(c, a); }, ps, mode());
      } else {
        DDerivation c = gcp.d(dim, mode());
        std::vector<WeylOp> ps;
        for (std::size_t k = 0; k < probes; ++k) ps.push_back(rng.op(dim, 3, 2, 4, mode()));
        rep = generator_check(family_d(c), [c](const WeylOp& a) { return apply_d_derivation(c, a); }, ps, mode());
      }
      Outcome o;
      o.code = rep.passed() ? 0 : 3;
      o.text = report_text(rep.passed(), rep.failures, rep.probes,
                           "generator (" + std::string(mode_name(rep.regime)) + ", " + gcp.family + ")");
      o.result = {{"passed", rep.passed()}, {"probes", rep.probes}, {"failures", rep.failures}};
      o.witnesses = rep.witnesses;
      return o;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    output.out = app.help();
    return output;
  } catch (const CLI::ParseError& e) {
    output.code = 1;
    output.err = std::string(e.what()) + "\n";
    return output;
  }

  try {
    outcome = action();
  } catch (const SyntaxError& e) {
    output.code = 1;
    output.err = std::string("syntax error: ") + e.what() + "\n";
    return output;
  } catch (const Error& e) {
    output.code = 2;
    output.err = std::string("error: ") + e.what() + "\n";
    return output;
  }

  output.code = outcome.code;
  if (as_json) {
    json j;
    std::string input;
    for (const auto& a : echo) input += (input.empty() ? "" : " ") + a;
    j["input"] = input;
    j["result"] = outcome.result;
    j["mode"] = std::string(mode_name(mode()));
    j["seed"] = seed;
    j["witnesses"] = json::array();
    for (const auto& w : outcome.witnesses) j["witnesses"].push_back(witness_json(w));
    output.out = j.dump(2) + "\n";
  } else {
    output.out = outcome.text;
    for (const auto& w : outcome.witnesses) output.out += witness_text(w);
  }
  if (outcome.code == 2 && !as_json) std::swap(output.out, output.err);
  return output;
}

}  // namespace liederiv
