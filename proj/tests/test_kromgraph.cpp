#include <gtest/gtest.h>

#include "oracle.hpp"
#include "so2kit/so2kit.hpp"

using namespace so2kit;

namespace {

const char* kExample = "forall y1/1 forall y2/1 exists x1 exists x2 ((y1(x2) | ~x1) & (~y1(x2) | x1) & (y2(x1) | ~x2) & (~y2(x1) | x2))";
const char* kIdentity = "exists f/1 forall x ((~f(x) | x) & (~x | f(x)))";

int vertex_of(const ImplicationGraph& g, const std::string& label) {
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.label(v) == label) return v;
  ADD_FAILURE() << "no vertex " << label;
  return -1;
}

bool has_edge(const ImplicationGraph& g, const std::string& a, const std::string& b) {
  const auto& out = g.adj[static_cast<std::size_t>(vertex_of(g, a))];
  return std::find(out.begin(), out.end(), vertex_of(g, b)) != out.end();
}

std::vector<char> reachable(const Digraph& dag, int from) {
  std::vector<char> seen(dag.size(), 0);
  std::vector<int> stack{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (int w : dag[static_cast<std::size_t>(c)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
  }
  return seen;
}

// The marking is total, skew-consistent and no path leads from a true
// component to a contingent or false one, or from a contingent one to a false one.
void check_marking(const ImplicationGraph& g, const ComponentDAG& d) {
  for (int c = 0; c < d.count(); ++c) {
    Mark m = d.marks[static_cast<std::size_t>(c)];
    ASSERT_NE(m, Mark::Unmarked);
    Mark n = d.marks[static_cast<std::size_t>(d.negation(g, c))];
    Mark expected = m == Mark::Contingent ? Mark::Contingent : m == Mark::True ? Mark::False : Mark::True;
    ASSERT_EQ(n, expected);
    if (m == Mark::False) continue;
    auto seen = reachable(d.dag, c);
    for (int w = 0; w < d.count(); ++w) {
      if (!seen[static_cast<std::size_t>(w)] || w == c) continue;
      Mark mw = d.marks[static_cast<std::size_t>(w)];
      ASSERT_NE(mw, Mark::False);
      if (m == Mark::True) {
        ASSERT_NE(mw, Mark::Contingent);
      }
    }
  }
}

}  // namespace

TEST(ImplicationGraph, ContrapositivePair) {
  ImplicationGraph g = build_graph(parse("forall a exists b (~a | b)"));
  EXPECT_TRUE(has_edge(g, "a", "b"));
  EXPECT_TRUE(has_edge(g, "~b", "~a"));
}

TEST(ImplicationGraph, UnitClauseEdge) {
  ImplicationGraph g = build_graph(parse("exists a a"));
  EXPECT_TRUE(has_edge(g, "~a", "a"));
}

TEST(ImplicationGraph, ConstantClauses) {
  EXPECT_TRUE(build_graph(parse("exists a (0 | 0) & (a | 1)")).empty_clause);
  EXPECT_FALSE(decide(parse("exists a ((a | 0) & (~a | 0))")));
}

TEST(ImplicationGraph, Rejections) {
  EXPECT_THROW(build_graph(parse("exists a, b, c (a | b | c)")), FragmentError);
  EXPECT_THROW(build_graph(parse("(exists a a) & b")), FragmentError);
  EXPECT_THROW(decide(parse("exists f/1 forall x forall y (f(x) | f(y))")), FragmentError);
}

TEST(Components, TwoCycle) {
  ImplicationGraph g = build_graph(parse("exists a, b ((~a | b) & (~b | a))"));
  ComponentDAG d = components(g);
  EXPECT_EQ(d.of(vertex_of(g, "a")), d.of(vertex_of(g, "b")));
  EXPECT_EQ(d.count(), 2);
}

TEST(Components, EdgelessGraphHasSingletons) {
  ImplicationGraph g = build_graph(parse("exists a, b 1"));
  EXPECT_EQ(components(g).count(), g.vertex_count());
}

TEST(Depends, ArgumentCase) {
  ImplicationGraph g = build_graph(parse(kIdentity));
  EXPECT_TRUE(depends(g, vertex_of(g, "f(x)"), vertex_of(g, "x")));
  EXPECT_TRUE(depends(g, vertex_of(g, "~f(x)"), vertex_of(g, "~x")));
}

TEST(Depends, CrossingDependencyExample) {
  ImplicationGraph g = build_graph(parse(kExample));
  EXPECT_TRUE(depends(g, vertex_of(g, "y1(x2)"), vertex_of(g, "x2")));
  EXPECT_TRUE(depends(g, vertex_of(g, "y2(x1)"), vertex_of(g, "x1")));
  EXPECT_FALSE(depends(g, vertex_of(g, "x1"), vertex_of(g, "x2")));
}

TEST(Depends, PropositionDoesNotDependOnLaterFunction) {
  ImplicationGraph g = build_graph(parse("forall x exists f/1 ((~x | f(x)) & (~f(x) | x))"));
  EXPECT_FALSE(depends(g, vertex_of(g, "x"), vertex_of(g, "f(x)")));
}

TEST(Conditions, CrossingDependencyExampleViolatesAcyclicity) {
  ConditionReport r = check_conditions(parse(kExample));
  EXPECT_TRUE(r.cond1);
  EXPECT_TRUE(r.cond2);
  EXPECT_TRUE(r.cond3);
  EXPECT_FALSE(r.cond4);
  EXPECT_FALSE(r.cycle4.empty());
  EXPECT_FALSE(decide(parse(kExample)));
}

TEST(Conditions, IdentityFunctionSatisfiesAll) {
  ConditionReport r = check_conditions(parse(kIdentity));
  EXPECT_TRUE(r.holds());
  EXPECT_TRUE(decide(parse(kIdentity)));
  EXPECT_TRUE(oracle::truth(parse(kIdentity)));
}

TEST(Conditions, UniversalToUniversalPath) {
  ConditionReport r = check_conditions(parse("forall u, v exists x ((~u | x) & (~x | v))"));
  EXPECT_FALSE(r.cond1);
  ASSERT_GE(r.path1.size(), 2U);
}

TEST(Conditions, ComplementaryPair) {
  ConditionReport r = check_conditions(parse("exists a ((~a | ~a) & (a | a))"));
  EXPECT_FALSE(r.cond2);
  EXPECT_GE(r.vertex2, 0);
}

TEST(Conditions, ExistentialMustSeeItsUniversal) {
  ConditionReport r = check_conditions(parse("exists x forall u ((~u | x) & (~x | u))"));
  EXPECT_FALSE(r.cond3);
}

TEST(Marking, SkewPairForLoneExistential) {
  ImplicationGraph g = build_graph(parse("exists a (a | ~a)"));
  ComponentDAG d = marking_witness(g);
  int a = vertex_of(g, "a");
  EXPECT_NE(d.marks[static_cast<std::size_t>(d.of(a))], d.marks[static_cast<std::size_t>(d.of(a ^ 1))]);
  check_marking(g, d);
}

TEST(Marking, IdentityComponentIsContingent) {
  ImplicationGraph g = build_graph(parse(kIdentity));
  ComponentDAG d = marking_witness(g);
  EXPECT_EQ(d.of(vertex_of(g, "f(x)")), d.of(vertex_of(g, "x")));
  EXPECT_EQ(d.marks[static_cast<std::size_t>(d.of(vertex_of(g, "f(x)")))], Mark::Contingent);
  EXPECT_THROW(marking_witness(build_graph(parse(kExample))), FragmentError);
}

TEST(Marking, RefinementResolvesContingentComponents) {
  ImplicationGraph g = build_graph(parse(kIdentity));
  for (bool x : {false, true}) {
    ComponentDAG d = marking_witness(g);
    Interpretation i;
    i.assign(Var{"x", 0}, x);
    refine_marking(g, d, i);
    EXPECT_EQ(d.marks[static_cast<std::size_t>(d.of(vertex_of(g, "f(x)")))], x ? Mark::True : Mark::False);
  }
}

TEST(NlFragment, UniversalTwoCopy) {
  Formula f = parse("forall g/1 exists f/1 forall x ((~f(x) | g(x)) & (~g(x) | f(x)))");
  EXPECT_TRUE(decide_nl_fragment(f));
  EXPECT_TRUE(oracle::truth(f));
}

TEST(NlFragment, NestedUniversalLevelOne) {
  Formula f = parse("forall g/1, h/1 exists x ((~x | g(h(x))) & (x | ~g(h(x))))");
  EXPECT_EQ(decide_nl_fragment(f), oracle::truth(f));
}

TEST(NlFragment, ElidesEarlierArgument) {
  Formula f = parse("forall z exists f/2 forall x ((~f(z, x) | x) & (~x | f(z, x)))");
  Formula b = braid_nl_fragment(f);
  EXPECT_TRUE(classify(b).is_braided);
  EXPECT_EQ(decide(b), oracle::truth(f));
}

TEST(KromGraphProperty, SkewSymmetry) {
  gen::Rng rng(61);
  for (int n = 0; n < 2000; ++n) {
    ImplicationGraph g = build_graph(gen::random_braided_usk(rng));
    std::set<std::pair<int, int>> edges;
    for (int v = 0; v < g.vertex_count(); ++v)
      for (int w : g.adj[static_cast<std::size_t>(v)]) edges.emplace(v, w);
    for (auto [v, w] : edges) ASSERT_TRUE(edges.contains({w ^ 1, v ^ 1}));
  }
}

TEST(KromGraphProperty, AgreesWithReferenceAndConditionsSplit) {
  gen::Rng rng(62);
  int truths = 0;
  for (int n = 0; n < 3000; ++n) {
    Formula f = gen::random_braided_usk(rng);
    bool truth = oracle::truth(f);
    ConditionReport r = check_conditions(f);
    ASSERT_EQ(r.holds(), truth) << print(f);
    truths += truth ? 1 : 0;
    if (truth) {
      ImplicationGraph g = build_graph(f);
      ComponentDAG d = marking_witness(g);
      check_marking(g, d);
    }
  }
  EXPECT_GT(truths, 100);
}

TEST(KromGraphProperty, AcyclicityMatchesPairwiseDependencies) {
  gen::Rng rng(64);
  int cycles = 0;
  for (int n = 0; n < 3000; ++n) {
    ImplicationGraph g = build_graph(gen::random_braided_usk(rng));
    ComponentDAG d = components(g);
    Digraph dep(static_cast<std::size_t>(d.count()));
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (!g.is_universal(v)) continue;
      for (int w = 0; w < g.vertex_count(); ++w)
        if (depends(g, v, w)) dep[static_cast<std::size_t>(d.of(v))].push_back(d.of(w));
    }
    SccResult scc = strongly_connected_components(dep);
    bool cyclic = scc.count < d.count();
    for (int c = 0; c < d.count() && !cyclic; ++c)
      for (int w : dep[static_cast<std::size_t>(c)]) cyclic = cyclic || w == c;
    ConditionReport r = check_conditions(g, d);
    ASSERT_EQ(r.cond4, !cyclic);
    if (cyclic) {
      ++cycles;
      ASSERT_FALSE(r.cycle4.empty());
      for (int c : r.cycle4) ASSERT_LT(c, d.count());
    }
  }
  EXPECT_GT(cycles, 0);
}

TEST(KromGraphProperty, RefinedMarkingSatisfiesImplications) {
  gen::Rng rng(63);
  int checked = 0;
  for (int n = 0; n < 3000 && checked < 300; ++n) {
    Formula f = gen::random_braided_usk(rng);
    ImplicationGraph g = build_graph(f);
    if (!check_conditions(g, components(g)).holds()) continue;
    std::vector<Var> univ;
    for (std::size_t x = 0; x < g.vars.size(); ++x)
      if (g.universal[x]) univ.push_back(g.vars[x]);
    std::size_t bits = 0;
    for (const auto& v : univ) bits += std::size_t{1} << v.arity;
    if (bits > 10) continue;
    ++checked;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << bits); ++b) {
      Interpretation i;
      std::size_t pos = 0;
      for (const auto& v : univ) {
        TruthTable t(v.arity);
        for (std::size_t r = 0; r < t.size(); ++r) t.set(r, ((b >> pos++) & 1U) != 0);
        i.assign(v, t);
      }
      ComponentDAG d = marking_witness(g);
      refine_marking(g, d, i);
      for (int v = 0; v < g.vertex_count(); ++v) {
        ASSERT_NE(d.marks[static_cast<std::size_t>(d.of(v))], Mark::Contingent);
        if (d.marks[static_cast<std::size_t>(d.of(v))] != Mark::True) continue;
        for (int w : g.adj[static_cast<std::size_t>(v)]) ASSERT_EQ(d.marks[static_cast<std::size_t>(d.of(w))], Mark::True) << print(f);
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(KromGraphProperty, NlFragmentAgreesWithReference) {
  gen::Rng rng(64);
  int decided = 0;
  for (int n = 0; n < 1500; ++n) {
    Formula f = n % 2 ? gen::random_sigma1(rng, false) : gen::random_alternating(rng, 2, false, 1);
    FragmentProfile p = classify(f);
    if (!p.is_unique) continue;
    ++decided;
    ASSERT_EQ(decide_nl_fragment(f), oracle::truth(f)) << print(f);
  }
  EXPECT_GT(decided, 200);
}
