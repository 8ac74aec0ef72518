#include <gtest/gtest.h>

#include "oracle.hpp"
#include "so2kit/so2kit.hpp"

using namespace so2kit;

namespace {

const char* kExample = "forall y1/1 forall y2/1 exists x1 exists x2 ((y1(x2) <-> x1) & (y2(x1) <-> x2))";

Formula atom(const char* name) { return Formula::prop(name); }

}  // namespace

TEST(TruthTable, IndexIsBigEndian) {
  EXPECT_EQ(TruthTable::index_of({true, false}), 2U);
  EXPECT_EQ(TruthTable::index_of({false, true}), 1U);
  EXPECT_EQ(TruthTable::tuple_of(6, 3), (std::vector<bool>{true, true, false}));
}

TEST(TruthTable, TupleIndexRoundTrip) {
  for (int n = 0; n <= 8; ++n)
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i)
      EXPECT_EQ(TruthTable::index_of(TruthTable::tuple_of(i, n)), i);
}

TEST(TruthTable, FromString) {
  EXPECT_EQ(TruthTable::nand().arity(), 2);
  EXPECT_EQ(TruthTable::nand().at({true, true}), false);
  EXPECT_THROW(TruthTable::from_string("010"), Error);
}

TEST(Evaluate, NegatedProposition) {
  Interpretation i;
  i.assign(Var{"x", 0}, true);
  EXPECT_FALSE(evaluate(Formula::negation(atom("x")), i));
}

TEST(Evaluate, TableLookup) {
  Interpretation i;
  Var f{"f", 1};
  i.assign(f, TruthTable::negation());
  i.assign(Var{"x", 0}, false);
  EXPECT_TRUE(evaluate(Formula::atom(Term::variable(f, {Term::proposition("x")})), i));
}

TEST(Evaluate, CrossingDependencyExampleIsFalse) { EXPECT_FALSE(evaluate(parse(kExample))); }

TEST(Evaluate, UnboundVariableIsBindingError) { EXPECT_THROW(evaluate(atom("x")), BindingError); }

TEST(Evaluate, ArityMismatchIsBindingError) {
  Interpretation i;
  EXPECT_THROW(i.assign(Var{"f", 1}, TruthTable::nand()), BindingError);
}

TEST(Evaluate, ArityCapIsInfeasible) {
  Caps caps;
  caps.eval_arity = 1;
  EXPECT_THROW(evaluate(parse("exists f/2 forall x f(x, x)"), caps), InfeasibleError);
}

TEST(Evaluate, Deterministic) {
  Formula f = parse(kExample);
  bool first = evaluate(f);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(evaluate(f), first);
}

TEST(Equivalent, Examples) {
  EXPECT_TRUE(equivalent(parse("x & y"), parse("y & x")));
  EXPECT_FALSE(equivalent(parse("x"), parse("~x")));
  EXPECT_TRUE(equivalent(parse("f(g(x))"), parse("exists y ((g(x) <-> y) & f(y))")));
}

TEST(Instantiate, Examples) {
  Var f{"f", 1};
  EXPECT_TRUE(equivalent(instantiate(parse("f(x)"), f, TruthTable::identity()), parse("x")));
  EXPECT_TRUE(evaluate(instantiate(parse("f(0)"), f, TruthTable::negation())));
  EXPECT_TRUE(equivalent(instantiate(parse("~f(x) | x"), f, TruthTable::constant(1, false)), parse("1")));
}

TEST(FreeVars, Examples) {
  EXPECT_EQ(free_vars(parse("exists f/1 f(x)")), (std::set<Var>{Var{"x", 0}}));
  EXPECT_EQ(free_vars(parse("x & y")), (std::set<Var>{Var{"x", 0}, Var{"y", 0}}));
  EXPECT_TRUE(free_vars(parse(kExample)).empty());
}

TEST(EvaluateProperty, AgreesWithReferenceSemantics) {
  gen::Rng rng(11);
  for (int n = 0; n < 1500; ++n) {
    Formula f = gen::random_braided_usk(rng);
    ASSERT_EQ(evaluate(f), oracle::truth(f)) << print(f);
  }
  for (int n = 0; n < 1500; ++n) {
    Formula f = gen::random_alternating(rng, gen::uniform(rng, 1, 3), gen::coin(rng), 1);
    ASSERT_EQ(evaluate(f), oracle::truth(f)) << print(f);
  }
}

TEST(EvaluateProperty, QuantifierDuality) {
  gen::Rng rng(12);
  std::vector<Var> vars{{"f", 1}, {"g", 2}, {"x", 0}};
  for (int n = 0; n < 300; ++n) {
    std::vector<Var> qs;
    int count = gen::uniform(rng, 1, 3);
    for (int i = 0; i < count; ++i) qs.push_back(vars[static_cast<std::size_t>(i)]);
    std::vector<Term> atoms{Term::proposition("x")};
    atoms.push_back(Term::variable(vars[0], {Term::proposition("x")}));
    atoms.push_back(Term::variable(vars[1], {Term::proposition("x"), Term::constant(true)}));
    Formula body = gen::random_formula(rng, atoms, 4);
    for (std::size_t i = qs.size(); i-- > 1;) body = Formula::quantified(gen::coin(rng) ? Quantifier::Exists : Quantifier::Forall, qs[i], body);
    for (const auto& v : {Var{"f", 1}, Var{"g", 2}, Var{"x", 0}})
      if (std::find(qs.begin(), qs.end(), v) == qs.end()) body = Formula::exists(v, body);
    Formula all = Formula::forall(qs[0], body);
    Formula dual = Formula::negation(Formula::exists(qs[0], Formula::negation(body)));
    ASSERT_EQ(evaluate(all), evaluate(dual)) << print(all);
  }
}

TEST(EvaluateProperty, DesugarPreservesTruth) {
  gen::Rng rng(13);
  Var f{"f", 1}, g{"g", 2};
  for (int n = 0; n < 10000; ++n) {
    std::vector<Term> atoms{Term::proposition("x"), Term::proposition("y")};
    atoms.push_back(Term::variable(f, {gen::pick(rng, atoms)}));
    atoms.push_back(Term::variable(g, {Term::proposition("x"), Term::constant(gen::coin(rng))}));
    Formula body = gen::random_formula(rng, atoms, 5);
    Formula closed = Formula::exists(f, Formula::forall(g, Formula::forall(Var{"x", 0}, Formula::exists(Var{"y", 0}, body))));
    ASSERT_EQ(evaluate(desugar(closed)), evaluate(closed)) << print(closed);
  }
}

TEST(AlphaEquivalence, RenamedBoundVariables) {
  EXPECT_TRUE(alpha_equivalent(parse("exists f/1 forall x f(x)"), parse("exists g/1 forall y g(y)")));
  EXPECT_FALSE(alpha_equivalent(parse("exists f/1 forall x f(x)"), parse("forall g/1 forall y g(y)")));
}
