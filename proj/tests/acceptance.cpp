// Acceptance suite: one PASS/FAIL line per criterion; exit status 0 iff all pass.

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "instances.hpp"
#include "so2kit/report.hpp"
#include "so2kit/so2kit.hpp"

using namespace so2kit;

namespace {

constexpr int kBraidedCorpus = 10000;
constexpr double kBraidedBudgetSeconds = 300.0;
constexpr int kSigma1Corpus = 10000;
constexpr int kTransformCorpus = 1000;
constexpr double kEncoderBudgetSeconds = 60.0;
constexpr int kEncoderTimeBound = 3;
constexpr int kPi1Corpus = 200;
constexpr int kSubsolverCorpus = 10000;
constexpr int kSubsolverMaxVars = 12;
constexpr int kScalingClauses = 100000;
constexpr double kScalingBudgetSeconds = 10.0;
constexpr int kStreamUniversals = 20;
constexpr long kStreamMemoryBudgetKb = 512L * 1024L;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << o.detail << std::endl;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> inputs_up_to(int len) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (static_cast<int>(out[i].size()) < len)
      for (char c : {'0', '1'}) out.push_back(out[i] + c);
  return out;
}

bool satisfies(const PropCnf& cnf, std::uint32_t bits) {
  for (const auto& c : cnf.clauses) {
    bool sat = false;
    for (int l : c) sat = sat || (((bits >> (std::abs(l) - 1)) & 1U) != 0) == (l > 0);
    if (!sat) return false;
  }
  return true;
}

Outcome braided_oracle_agreement() {
  gen::Rng rng(1001);
  auto t0 = Clock::now();
  int disagreements = 0, truths = 0;
  for (int n = 0; n < kBraidedCorpus; ++n) {
    Formula f = gen::random_braided_usk(rng);
    bool truth = evaluate(f);
    truths += truth ? 1 : 0;
    if (decide(f) != truth) ++disagreements;
  }
  double s = seconds_since(t0);
  std::ostringstream d;
  d << kBraidedCorpus << " instances, " << truths << " true, " << disagreements << " disagreements, " << s << " s (budget "
    << kBraidedBudgetSeconds << " s)";
  return {disagreements == 0 && s < kBraidedBudgetSeconds, d.str()};
}

Outcome crossing_dependency_example() {
  Formula f = parse(read_file(std::string(SO2KIT_DATA_DIR) + "/example3.so2"));
  bool brute = evaluate(f);
  Formula cnf = to_cnf(f);
  ImplicationGraph g = build_graph(cnf);
  ComponentDAG d = components(g);
  ConditionReport r = check_conditions(g, d);
  Json explain = krom_report(g, d, r);
  bool only4 = explain["violated"] == Json::array({4});
  std::ostringstream s;
  s << "bruteforce " << (brute ? "TRUE" : "FALSE") << ", krom-graph " << (r.holds() ? "TRUE" : "FALSE") << ", violated "
    << explain["violated"].dump();
  return {!brute && !r.holds() && only4, s.str()};
}

Outcome condition_split() {
  gen::Rng rng(1001);
  int failed_true = 0, held_false = 0, failed = 0;
  for (int n = 0; n < kBraidedCorpus; ++n) {
    Formula f = gen::random_braided_usk(rng);
    bool truth = evaluate(f);
    bool holds = check_conditions(f).holds();
    failed += holds ? 0 : 1;
    if (!holds && truth) ++failed_true;
    if (holds && !truth) ++held_false;
  }
  std::ostringstream s;
  s << failed << " instances with a failed condition; " << failed_true << " of them true, " << held_false
    << " all-hold instances false";
  return {failed_true == 0 && held_false == 0, s.str()};
}

Outcome expansion_oracle_agreement() {
  gen::Rng rng(1004);
  int sh_bad = 0, sk_bad = 0, path_bad = 0;
  for (int n = 0; n < kSigma1Corpus; ++n) {
    Formula h = gen::random_sigma1(rng, true);
    bool th = evaluate(h);
    if (decide_sigma1_sh(h, false) != th || decide_sigma1_sh(h, true) != th) ++sh_bad;
    Formula k = gen::random_sigma1(rng, false);
    bool tk = evaluate(k);
    bool stream = decide_sigma1_sk(k, true), mat = decide_sigma1_sk(k, false);
    if (mat != tk) ++sk_bad;
    if (stream != mat) ++path_bad;
  }
  std::ostringstream s;
  s << kSigma1Corpus << " Horn and " << kSigma1Corpus << " Krom instances; disagreements Horn " << sh_bad << ", Krom " << sk_bad
    << ", stream vs materialized " << path_bad;
  return {sh_bad == 0 && sk_bad == 0 && path_bad == 0, s.str()};
}

Outcome transform_equivalence() {
  gen::Rng rng(1005);
  int bad_eq[5] = {0, 0, 0, 0, 0}, bad_flag[5] = {0, 0, 0, 0, 0};
  for (int n = 0; n < kTransformCorpus; ++n) {
    Formula a = instances::nested(rng);
    Formula sa = make_simple(a);
    bad_eq[0] += equivalent(a, sa) ? 0 : 1;
    FragmentProfile pa = classify(sa);
    bad_flag[0] += pa.is_simple && pa.is_prenex ? 0 : 1;

    Formula b = instances::elidable(rng);
    Formula eb = elide(b, Var{"f", 2}, Term::proposition("z"));
    bad_eq[1] += equivalent(b, eb) ? 0 : 1;
    bool shrunk = false;
    for (const auto& [q, v] : split_prefix(eb).quantifiers) shrunk = shrunk || (v.name.rfind("f", 0) == 0 && v.arity == 1);
    bad_flag[1] += shrunk && classify(eb).level == classify(b).level ? 0 : 1;

    Formula c = instances::non_unique(rng);
    Formula uc = make_unique(c);
    bad_eq[2] += equivalent(c, uc) ? 0 : 1;
    FragmentProfile pc = classify(uc);
    bad_flag[2] += pc.is_unique && pc.prefix == classify(c).prefix && pc.level == classify(c).level ? 0 : 1;

    Formula d = instances::propositional(rng);
    Formula cd = to_cnf(d);
    bad_eq[3] += equivalent(d, cd) ? 0 : 1;
    bad_flag[3] += classify(cd).is_cnf ? 0 : 1;

    Formula e = instances::cnf(rng);
    Formula ce = to_core(e);
    bad_eq[4] += equivalent(e, ce) ? 0 : 1;
    FragmentProfile pe = classify(ce);
    bad_flag[4] += pe.is_core && pe.prefix == PrefixKind::Sigma && pe.level == 1 ? 0 : 1;
  }
  const char* names[5] = {"make_simple", "elide", "make_unique", "to_cnf", "to_core"};
  std::ostringstream s;
  s << kTransformCorpus << " instances each;";
  bool ok = true;
  for (int i = 0; i < 5; ++i) {
    s << " " << names[i] << " " << bad_eq[i] << "/" << bad_flag[i];
    ok = ok && bad_eq[i] == 0 && bad_flag[i] == 0;
  }
  s << " (inequivalent/flag failures)";
  return {ok, s.str()};
}

Outcome encoder_faithfulness() {
  int mismatches = 0, instances = 0;
  double worst = 0;
  for (const auto& [name, m] : tm_zoo())
    for (const auto& in : inputs_up_to(3)) {
      bool accept = run_tm(m, in, 100000, 64).outcome == TMOutcome::Accept;
      auto t0 = Clock::now();
      bool ps = decide_sigma1_sk(encode_pspace_tm(m, in));
      worst = std::max(worst, seconds_since(t0));
      t0 = Clock::now();
      bool ex = decide_sigma1_sh(encode_exp_tm(m, in, kEncoderTimeBound));
      worst = std::max(worst, seconds_since(t0));
      instances += 2;
      mismatches += (ps != accept) + (ex != accept);
    }
  std::ostringstream s;
  s << instances << " verifications, " << mismatches << " mismatches, slowest " << worst << " s (budget "
    << kEncoderBudgetSeconds << " s)";
  return {mismatches == 0 && worst < kEncoderBudgetSeconds, s.str()};
}

Outcome nand_gadget() {
  Var g{"g", 2};
  std::vector<Term> atoms{Term::proposition("a"), Term::proposition("b"), Term::proposition("c")};
  std::vector<Clause> clauses{{}};
  for (std::size_t i = 0; i < clauses.size(); ++i)
    if (clauses[i].size() < 3)
      for (const auto& t : atoms)
        for (bool pos : {true, false}) {
          Clause c = clauses[i];
          c.push_back(Literal{t, pos});
          clauses.push_back(c);
        }
  int wrong_rows = 0;
  Interpretation interp;
  interp.assign(g, TruthTable::nand());
  for (const auto& c : clauses) {
    Formula gadget = Formula::atom(nand_of_clause(c, g));
    for (int row = 0; row < 8; ++row) {
      for (int i = 0; i < 3; ++i) interp.assign(atoms[static_cast<std::size_t>(i)].head(), ((row >> i) & 1) != 0);
      wrong_rows += evaluate(gadget, interp) == !evaluate(clause_formula(c), interp) ? 0 : 1;
    }
  }
  gen::Rng rng(1007);
  int bad = 0;
  for (int n = 0; n < kPi1Corpus; ++n) {
    Formula phi = gen::random_pi1_3cnf(rng);
    Formula out = encode_pi1_core(phi);
    FragmentProfile p = classify(out);
    bool shape = p.prefix == PrefixKind::Pi && p.level == 1 && p.is_core && p.is_simple;
    bad += evaluate(out) == evaluate(phi) && shape ? 0 : 1;
  }
  std::ostringstream s;
  s << clauses.size() << " clauses x 8 rows, " << wrong_rows << " wrong rows; " << kPi1Corpus << " formulas, " << bad
    << " not preserved";
  return {wrong_rows == 0 && bad == 0, s.str()};
}

Outcome subsolver_soundness() {
  gen::Rng rng(1008);
  int horn_bad = 0, least_bad = 0, krom_bad = 0, horn_sat_count = 0;
  for (int n = 0; n < kSubsolverCorpus; ++n) {
    PropCnf h = gen::random_prop_cnf(rng, kSubsolverMaxVars, 3, true);
    PropCnf k = gen::random_prop_cnf(rng, kSubsolverMaxVars, 2, false);
    std::uint32_t meet = ~0U;
    bool any = false;
    for (std::uint32_t b = 0; b < (1U << h.num_vars); ++b)
      if (satisfies(h, b)) {
        any = true;
        meet &= b;
      }
    SatResult r = horn_sat(h);
    if (r.sat != any) ++horn_bad;
    if (r.sat && any) {
      ++horn_sat_count;
      std::uint32_t model = 0;
      for (int v = 0; v < h.num_vars; ++v) model |= r.model[static_cast<std::size_t>(v)] ? (1U << v) : 0U;
      if (model != (meet & ((1U << h.num_vars) - 1U)) || !satisfies(h, model)) ++least_bad;
    }
    bool kany = false;
    for (std::uint32_t b = 0; b < (1U << k.num_vars) && !kany; ++b) kany = satisfies(k, b);
    SatResult kr = two_sat(k);
    if (kr.sat != kany) ++krom_bad;
    if (kr.sat) {
      std::uint32_t model = 0;
      for (int v = 0; v < k.num_vars; ++v) model |= kr.model[static_cast<std::size_t>(v)] ? (1U << v) : 0U;
      if (!satisfies(k, model)) ++krom_bad;
    }
  }
  std::ostringstream s;
  s << kSubsolverCorpus << " Horn and " << kSubsolverCorpus << " Krom CNFs (<= " << kSubsolverMaxVars
    << " vars); horn_sat errors " << horn_bad << ", non-least models " << least_bad << " of " << horn_sat_count
    << " satisfiable, two_sat errors " << krom_bad;
  return {horn_bad == 0 && least_bad == 0 && krom_bad == 0, s.str()};
}

// Runs the streaming Krom engine in a child process and returns its verdict
// and peak resident set size in kilobytes.
std::pair<int, long> stream_in_child(const Formula& f) {
  pid_t pid = fork();
  if (pid == 0) {
    bool v = decide_sigma1_sk(f, true);
    _exit(v ? 10 : 11);
  }
  int status = 0;
  struct rusage usage {};
  wait4(pid, &status, 0, &usage);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, usage.ru_maxrss};
}

Outcome smoke_scaling() {
  const int k = kScalingClauses / 2;
  const int m = (kScalingClauses - k + 2) / 2;
  Formula family = instances::braided_family(m, k);
  auto t0 = Clock::now();
  bool verdict = decide(family);
  double s = seconds_since(t0);
  std::size_t clauses = as_cnf(split_prefix(family).matrix)->size();

  Formula wide = instances::wide_krom(kStreamUniversals);
  auto t1 = Clock::now();
  auto [code, kb] = stream_in_child(wide);
  double ws = seconds_since(t1);
  std::ostringstream d;
  d << "krom-graph on " << clauses << " clauses: " << (verdict ? "TRUE" : "FALSE") << " in " << s << " s (budget "
    << kScalingBudgetSeconds << " s); expansion-stream with " << kStreamUniversals << " universals: "
    << (code == 10 ? "TRUE" : code == 11 ? "FALSE" : "crashed") << ", peak " << kb / 1024 << " MB in " << ws << " s (budget "
    << kStreamMemoryBudgetKb / 1024 << " MB)";
  bool ok = verdict && clauses >= static_cast<std::size_t>(kScalingClauses) && s < kScalingBudgetSeconds && code == 10 &&
            kb < kStreamMemoryBudgetKb;
  return {ok, d.str()};
}

}  // namespace

int main() {
  report(1, "krom-graph oracle agreement", braided_oracle_agreement);
  report(2, "crossing-dependency example", crossing_dependency_example);
  report(3, "condition split", condition_split);
  report(4, "expansion oracle agreement", expansion_oracle_agreement);
  report(5, "transform equivalence", transform_equivalence);
  report(6, "encoder faithfulness", encoder_faithfulness);
  report(7, "nand gadget", nand_gadget);
  report(8, "subsolver soundness", subsolver_soundness);
  report(9, "smoke scaling", smoke_scaling);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
