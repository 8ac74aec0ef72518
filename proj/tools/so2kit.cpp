// so2kit: classify, solve, transform and generate second-order Boolean formulas.
//
// Exit codes: 0 success, 1 other error, 2 parse error, 3 fragment mismatch,
// 4 infeasible under the enumeration caps.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "so2kit/report.hpp"
#include "so2kit/so2kit.hpp"

namespace {

using namespace so2kit;

constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitFragment = 3;
constexpr int kExitInfeasible = 4;

struct Input {
  std::string path;
  std::string expr;
};

std::string read_file(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Formula load(const Input& in) {
  if (!in.expr.empty()) return parse(in.expr);
  if (in.path.empty()) throw Error("no input: give a file or --expr");
  return parse(read_file(in.path));
}

void write_output(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error("cannot write " + out);
  f << text << "\n";
}

void add_input(CLI::App* cmd, Input& in) {
  cmd->add_option("file", in.path, "Formula file ('-' for standard input)");
  cmd->add_option("--expr", in.expr, "Formula text");
}

// Prenex inputs outside CNF are clausified before fragment checks.
Formula normalize(const Formula& f) {
  if (!is_prenex(f)) return f;
  return classify(f).is_cnf ? f : to_cnf(f);
}

bool braided_usk(const FragmentProfile& p) {
  return p.is_prenex && p.is_krom && p.is_simple && p.is_unique && p.is_braided && p.is_closed;
}

bool nl_fragment(const FragmentProfile& p) {
  if (!p.is_prenex || !p.is_krom || !p.is_unique || !p.is_closed) return false;
  return (p.prefix == PrefixKind::Sigma && p.level == 1 && p.is_simple) ||
         (p.prefix == PrefixKind::Pi && p.level == 1) ||
         (p.prefix == PrefixKind::Pi && p.level == 2 && p.is_simple);
}

bool expansion_fragment(const FragmentProfile& p) {
  return p.is_prenex && p.is_cnf && p.is_simple && (p.is_horn || p.is_krom) && p.is_closed;
}

struct SolveOptions {
  Input in;
  std::string engine = "auto";
  bool explain = false;
  bool stats = false;
  bool json = false;
};

int cmd_solve(const SolveOptions& o) {
  Formula f = load(o.in);
  if (!free_vars(f).empty()) throw FragmentError("solve requires a closed formula");
  std::string engine = o.engine;
  Formula g = normalize(f);
  FragmentProfile p = classify(g);
  if (engine == "auto") {
    if (braided_usk(p) || nl_fragment(p))
      engine = "krom-graph";
    else if (expansion_fragment(p))
      engine = "expansion";
    else
      engine = "bruteforce";
  }
  Json out{{"engine", engine}};
  bool verdict;
  if (engine == "bruteforce") {
    verdict = evaluate(f);
  } else if (engine == "krom-graph") {
    Formula h = braided_usk(p) ? g : braid_nl_fragment(g);
    detail::require_braided_fragment(h);
    ImplicationGraph graph = build_graph(h);
    ComponentDAG dag = components(graph);
    ConditionReport r = check_conditions(graph, dag);
    verdict = r.holds();
    if (o.explain) out["explain"] = krom_report(graph, dag, r);
  } else if (engine == "expansion" || engine == "expansion-stream") {
    ExpansionStats st;
    verdict = decide_pik_horn_krom(g, engine == "expansion-stream", caps_from_env(), &st);
    if (o.stats || o.explain) out["stats"] = to_json(st);
  } else {
    throw Error("unknown engine " + engine);
  }
  out["verdict"] = verdict;
  if (o.json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (verdict ? "TRUE" : "FALSE") << "\n";
    if (out.contains("explain")) std::cout << out["explain"].dump(2) << "\n";
    if (out.contains("stats")) std::cout << out["stats"].dump(2) << "\n";
  }
  return 0;
}

struct TransformOptions {
  Input in;
  bool simple = false, cnf = false, core = false, unique = false, prenex = false, check = false, json = false;
  std::vector<std::string> elide;
  std::string out;
};

std::optional<Var> find_bound_rec(const Formula& f, const std::string& name, std::optional<int> arity) {
  if (f.is_quantifier() && f.var().name == name && (!arity || f.var().arity == *arity)) return f.var();
  for (const auto& k : f.children())
    if (auto v = find_bound_rec(k, name, arity)) return v;
  return std::nullopt;
}

Var find_bound(const Formula& f, const std::string& binder) {
  std::string name = binder;
  std::optional<int> arity;
  if (auto slash = binder.find('/'); slash != std::string::npos) {
    name = binder.substr(0, slash);
    arity = std::stoi(binder.substr(slash + 1));
  }
  if (auto v = find_bound_rec(f, name, arity)) return *v;
  throw FragmentError("no quantified variable " + binder);
}

int cmd_transform(const TransformOptions& o) {
  Formula f = load(o.in);
  int chosen = o.simple + o.cnf + o.core + o.unique + o.prenex + (o.elide.empty() ? 0 : 1);
  if (chosen != 1) throw Error("choose exactly one of --simple, --cnf, --core, --unique, --prenex, --elide");
  Formula g = f;
  if (o.simple) g = make_simple(f);
  if (o.cnf) g = to_cnf(f);
  if (o.core) g = to_core(f);
  if (o.unique) g = make_unique(f);
  if (o.prenex) g = to_prenex(f);
  if (!o.elide.empty()) {
    Formula t = parse(o.elide[1]);
    Term term = t.op() == Op::Const ? Term::constant(t.value()) : t.op() == Op::Atom ? t.term() : throw Error("elide: not a term");
    g = elide(f, find_bound(f, o.elide[0]), term);
  }
  std::optional<bool> eq;
  if (o.check) eq = equivalent(f, g);
  if (o.json) {
    Json j{{"formula", print(g)}, {"profile", to_json(classify(g))}};
    if (eq) j["equivalent"] = *eq;
    write_output(o.out, j.dump(2));
  } else {
    write_output(o.out, print(g));
    if (eq) std::cerr << "equivalent: " << (*eq ? "true" : "false") << "\n";
  }
  return eq && !*eq ? kExitOther : 0;
}

struct GenerateOptions {
  std::string pspace_tm, exp_tm, pi1_core, random_kind;
  std::string input;
  int pn = 0;
  std::uint64_t seed = 1;
  int count = 1;
  bool verify = false;
  bool json = false;
  std::string out;
};

// Writes the generated formula; under --json the formula and the
// verification outcome are reported together on standard output.
int emit_generated(const GenerateOptions& o, const std::string& text, const std::optional<std::pair<bool, std::string>>& check,
                   bool agree) {
  if (o.json) {
    Json j = Json::object();
    if (o.out.empty() || o.out == "-")
      j["formula"] = text;
    else
      write_output(o.out, text);
    if (check) j["verify"] = Json{{"verdict", check->first}, {"reference", check->second}, {"agree", agree}};
    std::cout << j.dump(2) << "\n";
  } else {
    write_output(o.out, text);
    if (check)
      std::cerr << "verified: " << (check->first ? "TRUE" : "FALSE") << (agree ? " == " : " != ") << check->second << "\n";
  }
  return agree ? 0 : kExitOther;
}

int cmd_generate(const GenerateOptions& o) {
  int chosen = !o.pspace_tm.empty() + !o.exp_tm.empty() + !o.pi1_core.empty() + !o.random_kind.empty();
  if (chosen != 1) throw Error("choose exactly one of --pspace-tm, --exp-tm, --pi1-core, --random");
  if (!o.random_kind.empty()) {
    gen::Rng rng(o.seed);
    std::string text;
    for (int i = 0; i < o.count; ++i) {
      Formula f = o.random_kind == "braided"    ? gen::random_braided_usk(rng)
                  : o.random_kind == "sigma1-sh" ? gen::random_sigma1(rng, true)
                  : o.random_kind == "sigma1-sk" ? gen::random_sigma1(rng, false)
                  : o.random_kind == "pi2-horn"  ? gen::random_alternating(rng, 2, true)
                  : o.random_kind == "pi2-krom"  ? gen::random_alternating(rng, 2, false)
                  : o.random_kind == "pi1-3cnf"  ? gen::random_pi1_3cnf(rng)
                                                 : throw Error("unknown random kind " + o.random_kind);
      text += (i ? "\n" : "") + print(f);
    }
    return emit_generated(o, text, std::nullopt, true);
  }
  if (!o.pi1_core.empty()) {
    Formula phi = parse(read_file(o.pi1_core));
    Formula g = encode_pi1_core(phi);
    if (!o.verify) return emit_generated(o, print(g), std::nullopt, true);
    bool a = evaluate(phi), b = evaluate(g);
    return emit_generated(o, print(g), std::make_pair(b, std::string(a ? "TRUE" : "FALSE")), a == b);
  }
  bool pspace = !o.pspace_tm.empty();
  TMSpec m = tm_from_json(Json::parse(read_file(pspace ? o.pspace_tm : o.exp_tm)));
  Formula g = pspace ? encode_pspace_tm(m, o.input, PspaceParams{o.pn, 0, 0}) : encode_exp_tm(m, o.input, o.pn > 0 ? o.pn : 3);
  if (!o.verify) return emit_generated(o, print(g), std::nullopt, true);
  TMRun run = run_tm(m, o.input, std::size_t{1} << 20, std::max<int>(static_cast<int>(o.input.size()) + 1, 1 << 12));
  bool engine = pspace ? decide_sigma1_sk(g) : decide_sigma1_sh(g);
  bool accept = run.outcome == TMOutcome::Accept;
  return emit_generated(o, print(g), std::make_pair(engine, std::string(to_string(run.outcome))), engine == accept);
}

int cmd_classify(const Input& in, bool json) {
  FragmentProfile p = classify(load(in));
  Json j = to_json(p);
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int cmd_check_equiv(const std::string& a, const std::string& b, bool json) {
  bool eq = equivalent(parse(read_file(a)), parse(read_file(b)));
  if (json)
    std::cout << Json{{"equivalent", eq}}.dump(2) << "\n";
  else
    std::cout << (eq ? "EQUIVALENT" : "NOT EQUIVALENT") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order Boolean formula toolkit"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable JSON output");

  Input classify_in;
  auto* classify_cmd = app.add_subcommand("classify", "Report prefix class and fragment flags");
  add_input(classify_cmd, classify_in);

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "Decide truth of a closed formula");
  add_input(solve_cmd, so.in);
  solve_cmd->add_option("--engine", so.engine, "auto | bruteforce | krom-graph | expansion | expansion-stream")
      ->check(CLI::IsMember({"auto", "bruteforce", "krom-graph", "expansion", "expansion-stream"}));
  solve_cmd->add_flag("--explain", so.explain, "Add the engine's JSON report");
  solve_cmd->add_flag("--stats", so.stats, "Add expansion statistics");

  TransformOptions to;
  auto* transform_cmd = app.add_subcommand("transform", "Apply an equivalence-preserving rewrite");
  add_input(transform_cmd, to.in);
  transform_cmd->add_flag("--simple", to.simple, "Remove nested function terms");
  transform_cmd->add_flag("--cnf", to.cnf, "Clausify (prenexing first)");
  transform_cmd->add_flag("--core", to.core, "Rewrite a quantifier-free CNF into core clauses");
  transform_cmd->add_flag("--unique", to.unique, "One argument tuple per function");
  transform_cmd->add_flag("--prenex", to.prenex, "Move quantifiers to the front");
  transform_cmd->add_option("--elide", to.elide, "Remove argument T of function F")->expected(2);
  transform_cmd->add_flag("--check", to.check, "Verify equivalence with the brute-force evaluator");
  transform_cmd->add_option("-o,--out", to.out, "Output file");

  GenerateOptions go;
  auto* generate_cmd = app.add_subcommand("generate", "Emit encoder output or random instances");
  generate_cmd->add_option("--pspace-tm", go.pspace_tm, "Machine JSON for the space-bounded encoding");
  generate_cmd->add_option("--exp-tm", go.exp_tm, "Machine JSON for the exponential-time encoding");
  generate_cmd->add_option("--pi1-core", go.pi1_core, "Formula file for the nand-gadget rewrite");
  generate_cmd->add_option("--random", go.random_kind, "braided | sigma1-sh | sigma1-sk | pi2-horn | pi2-krom | pi1-3cnf");
  generate_cmd->add_option("--input", go.input, "Machine input word");
  generate_cmd->add_option("--pn", go.pn, "Space bound (space-bounded) or time exponent (exponential-time)");
  generate_cmd->add_option("--seed", go.seed, "Random seed");
  generate_cmd->add_option("--count", go.count, "Number of random instances");
  generate_cmd->add_flag("--verify", go.verify, "Compare the engine verdict with the reference");
  generate_cmd->add_option("-o,--out", go.out, "Output file");

  std::string eq_a, eq_b;
  auto* equiv_cmd = app.add_subcommand("check-equiv", "Decide equivalence of two formulas by brute force");
  equiv_cmd->add_option("a", eq_a)->required();
  equiv_cmd->add_option("b", eq_b)->required();

  CLI11_PARSE(app, argc, argv);
  so.json = to.json = go.json = json;
  try {
    if (*classify_cmd) return cmd_classify(classify_in, json);
    if (*solve_cmd) return cmd_solve(so);
    if (*transform_cmd) return cmd_transform(to);
    if (*generate_cmd) return cmd_generate(go);
    if (*equiv_cmd) return cmd_check_equiv(eq_a, eq_b, json);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const FragmentError& e) {
    std::cerr << "fragment error: " << e.what() << "\n";
    return kExitFragment;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
