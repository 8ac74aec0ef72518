#ifndef SO2KIT_TESTS_INSTANCES_HPP
#define SO2KIT_TESTS_INSTANCES_HPP

// Seeded instance families for the transform checks and the scaling smoke runs.

#include <string>
#include <vector>

#include "so2kit/so2kit.hpp"

namespace instances {

using namespace so2kit;

/// Prenex formula with nested applications f(g(x, y)), g(f(y), x), f(f(x)).
inline Formula nested(gen::Rng& rng) {
  Var f{"f", 1}, g{"g", 2};
  Term x = Term::proposition("x"), y = Term::proposition("y");
  std::vector<Term> atoms{x, y, Term::variable(f, {Term::variable(g, {x, y})}), Term::variable(g, {Term::variable(f, {y}), x}),
                          Term::variable(f, {Term::variable(f, {x})})};
  Formula body = gen::random_formula(rng, atoms, 3);
  Quantifier q1 = gen::coin(rng) ? Quantifier::Exists : Quantifier::Forall;
  return Formula::quantified(q1, f, Formula::exists(g, Formula::forall(x.head(), Formula::exists(y.head(), body))));
}

/// CNF formula where h/1 occurs with several argument tuples.
inline Formula non_unique(gen::Rng& rng) {
  Var h{"h", 1};
  Term x = Term::proposition("x"), y = Term::proposition("y");
  std::vector<Term> atoms{x, y, Term::variable(h, {x}), Term::variable(h, {y}), Term::variable(h, {Term::constant(true)})};
  Formula body = gen::random_matrix(rng, atoms, 1, 4, 3, false);
  if (gen::coin(rng)) return Formula::exists(h, Formula::forall(x.head(), Formula::forall(y.head(), body)));
  return Formula::forall(h, Formula::exists(x.head(), Formula::exists(y.head(), body)));
}

/// forall z forall x exists f/2 with f applied to (z, x) or (x, z), and a free g/1.
inline Formula elidable(gen::Rng& rng) {
  Var f{"f", 2}, g{"g", 1};
  Term z = Term::proposition("z"), x = Term::proposition("x");
  Term fx = gen::coin(rng) ? Term::variable(f, {z, x}) : Term::variable(f, {x, z});
  std::vector<Term> atoms{z, x, fx, Term::variable(g, {z})};
  Formula body = Formula::conj({gen::random_formula(rng, atoms, 3), Formula::disj({Formula::atom(fx), gen::random_formula(rng, atoms, 2)})});
  return Formula::forall(z.head(), Formula::forall(x.head(), Formula::exists(f, body)));
}

/// Quantifier-free formula over a, b, c for clausification.
inline Formula propositional(gen::Rng& rng) {
  std::vector<Term> atoms{Term::proposition("a"), Term::proposition("b"), Term::proposition("c")};
  return gen::random_formula(rng, atoms, 4);
}

/// Quantifier-free CNF over a, b, c with clauses of up to three literals.
inline Formula cnf(gen::Rng& rng) {
  std::vector<Term> atoms{Term::proposition("a"), Term::proposition("b"), Term::proposition("c")};
  return gen::random_matrix(rng, atoms, 1, 3, 3, false);
}

/// exists f_1..f_m/1, e_1..e_k forall x_1..x_m: f_i(x_i) <-> x_i and the chain
/// e_j -> e_{j+1}; 2m + k - 1 clauses, braided and true.
inline Formula braided_family(int m, int k) {
  QuantifierList qs;
  std::vector<Clause> clauses;
  std::vector<Term> es;
  for (int j = 0; j < k; ++j) {
    es.push_back(Term::proposition("e" + std::to_string(j)));
    qs.emplace_back(Quantifier::Exists, es.back().head());
  }
  std::vector<Var> fs;
  for (int i = 0; i < m; ++i) {
    fs.push_back(Var{"f" + std::to_string(i), 1});
    qs.emplace_back(Quantifier::Exists, fs.back());
  }
  for (int i = 0; i < m; ++i) {
    Term x = Term::proposition("x" + std::to_string(i));
    qs.emplace_back(Quantifier::Forall, x.head());
    Term fx = Term::variable(fs[static_cast<std::size_t>(i)], {x});
    clauses.push_back({Literal{fx, false}, Literal{x, true}});
    clauses.push_back({Literal{x, false}, Literal{fx, true}});
  }
  for (int j = 0; j + 1 < k; ++j) clauses.push_back({Literal{es[static_cast<std::size_t>(j)], false}, Literal{es[static_cast<std::size_t>(j + 1)], true}});
  return with_prefix(qs, cnf_formula(clauses));
}

/// exists f/1 forall x_0..x_{n-1}: f(x_i) <-> f(x_{i+1}) for consecutive i (core, true).
inline Formula wide_krom(int n) {
  Var f{"f", 1};
  QuantifierList qs{{Quantifier::Exists, f}};
  std::vector<Term> xs;
  for (int i = 0; i < n; ++i) {
    xs.push_back(Term::proposition("x" + std::to_string(i)));
    qs.emplace_back(Quantifier::Forall, xs.back().head());
  }
  std::vector<Clause> clauses;
  for (int i = 0; i + 1 < n; ++i) {
    Term a = Term::variable(f, {xs[static_cast<std::size_t>(i)]}), b = Term::variable(f, {xs[static_cast<std::size_t>(i + 1)]});
    clauses.push_back({Literal{a, false}, Literal{b, true}});
    clauses.push_back({Literal{a, true}, Literal{b, false}});
  }
  return with_prefix(qs, cnf_formula(clauses));
}

}  // namespace instances

#endif
