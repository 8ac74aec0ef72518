#ifndef SO2KIT_RANDOM_HPP
#define SO2KIT_RANDOM_HPP

// Seeded random instance generators for property tests and benchmarks.

#include <random>
#include <string>
#include <vector>

#include "so2kit/core.hpp"
#include "so2kit/propsat.hpp"
#include "so2kit/transform.hpp"

namespace so2kit::gen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(xs.size()) - 1))];
}

inline Literal random_literal(Rng& rng, const std::vector<Term>& atoms) { return Literal{pick(rng, atoms), coin(rng)}; }

/// Clause over atoms with 1..max_len literals; with horn set at most one is positive.
inline Clause random_clause(Rng& rng, const std::vector<Term>& atoms, int max_len, bool horn) {
  int len = uniform(rng, 1, max_len);
  Clause c;
  bool positive_used = false;
  for (int i = 0; i < len; ++i) {
    Literal l = random_literal(rng, atoms);
    if (horn && l.positive) {
      if (positive_used) l.positive = false;
      positive_used = true;
    }
    c.push_back(l);
  }
  return c;
}

inline Formula random_matrix(Rng& rng, const std::vector<Term>& atoms, int min_clauses, int max_clauses, int max_len,
                             bool horn) {
  std::vector<Clause> cs;
  int n = uniform(rng, min_clauses, max_clauses);
  for (int i = 0; i < n; ++i) cs.push_back(random_clause(rng, atoms, max_len, horn));
  return cnf_formula(cs);
}

/// Closed braided, simple, unique Krom formula with at most six variables,
/// arity at most two and at most eight clauses.
inline Formula random_braided_usk(Rng& rng) {
  int nblocks = uniform(rng, 1, 3);
  Quantifier first = coin(rng) ? Quantifier::Exists : Quantifier::Forall;
  std::vector<Quantifier> q(static_cast<std::size_t>(nblocks));
  for (int b = 0; b < nblocks; ++b) q[b] = b % 2 == 0 ? first : dual(first);
  int nvars = uniform(rng, 2, 6);
  std::vector<int> block(static_cast<std::size_t>(nvars));
  std::vector<int> arity(static_cast<std::size_t>(nvars));
  for (int v = 0; v < nvars; ++v) {
    block[v] = uniform(rng, 0, nblocks - 1);
    arity[v] = coin(rng, 0.45) ? uniform(rng, 1, 2) : 0;
  }
  std::vector<Var> vars;
  std::vector<Term> atoms;
  std::vector<std::vector<int>> arg_index;
  std::vector<std::vector<int>> props_in(static_cast<std::size_t>(nblocks));
  for (int v = 0; v < nvars; ++v)
    if (arity[v] == 0) props_in[block[v]].push_back(v);
  for (int v = 0; v < nvars; ++v) {
    std::vector<int> range;
    if (arity[v] > 0) {
      int hi = block[v] + (q[block[v]] == Quantifier::Exists ? 1 : 2);
      for (int b = block[v]; b <= hi && b < nblocks; ++b) range.insert(range.end(), props_in[b].begin(), props_in[b].end());
      if (range.empty()) arity[v] = 0;
    }
    std::string name = (arity[v] > 0 ? (q[block[v]] == Quantifier::Exists ? "f" : "g") : (q[block[v]] == Quantifier::Exists ? "x" : "u")) +
                       std::to_string(v);
    vars.push_back(Var{name, arity[v]});
    std::vector<int> picks;
    for (int i = 0; i < arity[v]; ++i) picks.push_back(pick(rng, range));
    arg_index.push_back(picks);
  }
  for (int v = 0; v < nvars; ++v) {
    std::vector<Term> args;
    for (int a : arg_index[v]) args.push_back(Term::variable(vars[a]));
    atoms.push_back(Term::variable(vars[v], args));
  }
  std::vector<Clause> cs;
  int nclauses = uniform(rng, 1, 8);
  for (int i = 0; i < nclauses; ++i) {
    Clause c = random_clause(rng, atoms, 2, false);
    if (coin(rng, 0.05)) c.back() = Literal{Term::constant(coin(rng)), true};
    cs.push_back(c);
  }
  QuantifierList qs;
  for (int b = 0; b < nblocks; ++b)
    for (int v = 0; v < nvars; ++v)
      if (block[v] == b) qs.emplace_back(q[b], vars[v]);
  return with_prefix(qs, cnf_formula(cs));
}

/// Argument terms for a simple function application over the given propositions.
inline std::vector<Term> random_args(Rng& rng, int arity, const std::vector<Term>& props, double const_p = 0.1) {
  std::vector<Term> args;
  for (int i = 0; i < arity; ++i)
    args.push_back(props.empty() || coin(rng, const_p) ? Term::constant(coin(rng)) : pick(rng, props));
  return args;
}

/// Existential level-one simple Horn (horn=true) or Krom formula: at most two
/// functions of arity at most two, at most three universal propositions.
inline Formula random_sigma1(Rng& rng, bool horn) {
  int nf = uniform(rng, 1, 2);
  int nx = uniform(rng, 1, 3);
  QuantifierList qs;
  std::vector<Term> xs;
  std::vector<Var> fs;
  for (int i = 0; i < nf; ++i) {
    fs.push_back(Var{"f" + std::to_string(i), uniform(rng, 1, 2)});
    qs.emplace_back(Quantifier::Exists, fs.back());
  }
  if (coin(rng, 0.2)) {
    qs.emplace_back(Quantifier::Exists, Var{"e", 0});
  }
  for (int i = 0; i < nx; ++i) {
    xs.push_back(Term::proposition("x" + std::to_string(i)));
    qs.emplace_back(Quantifier::Forall, xs.back().head());
  }
  std::vector<Term> atoms = xs;
  for (const auto& f : fs) {
    int uses = uniform(rng, 1, 3);
    for (int i = 0; i < uses; ++i) atoms.push_back(Term::variable(f, random_args(rng, f.arity, xs)));
  }
  if (qs[static_cast<std::size_t>(nf)].second.name == "e") atoms.push_back(Term::proposition("e"));
  return with_prefix(qs, random_matrix(rng, atoms, 1, 6, horn ? 3 : 2, horn));
}

/// Simple Horn or Krom formula with function blocks (alternating, ending in
/// an existential function block) followed by universal propositions. The
/// number of function blocks is nblocks; the first block is universal when
/// nblocks is even.
inline Formula random_alternating(Rng& rng, int nblocks, bool horn, int max_arity = 2) {
  QuantifierList qs;
  std::vector<Term> xs;
  std::vector<Var> fs;
  for (int b = 0; b < nblocks; ++b) {
    Quantifier q = (nblocks - 1 - b) % 2 == 0 ? Quantifier::Exists : Quantifier::Forall;
    int n = uniform(rng, 1, 2);
    for (int i = 0; i < n; ++i) {
      fs.push_back(Var{(q == Quantifier::Exists ? "f" : "g") + std::to_string(fs.size()), uniform(rng, 1, max_arity)});
      qs.emplace_back(q, fs.back());
    }
  }
  int nx = uniform(rng, 1, 2);
  for (int i = 0; i < nx; ++i) {
    xs.push_back(Term::proposition("x" + std::to_string(i)));
    qs.emplace_back(Quantifier::Forall, xs.back().head());
  }
  std::vector<Term> atoms = xs;
  for (const auto& f : fs) {
    int uses = uniform(rng, 1, 2);
    for (int i = 0; i < uses; ++i) atoms.push_back(Term::variable(f, random_args(rng, f.arity, xs)));
  }
  return with_prefix(qs, random_matrix(rng, atoms, 1, 5, horn ? 3 : 2, horn));
}

/// Propositional CNF in DIMACS style.
inline PropCnf random_prop_cnf(Rng& rng, int max_vars, int max_len, bool horn) {
  PropCnf cnf;
  cnf.num_vars = uniform(rng, 1, max_vars);
  int n = uniform(rng, 0, 3 * cnf.num_vars);
  for (int i = 0; i < n; ++i) {
    int len = uniform(rng, 1, max_len);
    std::vector<int> c;
    bool positive_used = false;
    for (int j = 0; j < len; ++j) {
      int v = uniform(rng, 1, cnf.num_vars);
      bool pos = coin(rng, horn ? 0.3 : 0.5);
      if (horn && pos) {
        if (positive_used) pos = false;
        positive_used = true;
      }
      c.push_back(pos ? v : -v);
    }
    cnf.clauses.push_back(c);
  }
  return cnf;
}

/// Arbitrary formula built from every connective, over the given atoms.
inline Formula random_formula(Rng& rng, const std::vector<Term>& atoms, int depth) {
  if (depth <= 0 || coin(rng, 0.25)) {
    if (coin(rng, 0.05)) return Formula::constant(coin(rng));
    return Formula::atom(pick(rng, atoms));
  }
  switch (uniform(rng, 0, 4)) {
    case 0:
      return Formula::negation(random_formula(rng, atoms, depth - 1));
    case 1:
      return Formula::conj({random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1)});
    case 2:
      return Formula::disj({random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1)});
    case 3:
      return Formula::implies(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
    default:
      return Formula::iff(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1));
  }
}

/// Universal level-one formula with a 3CNF matrix over unary/binary function
/// terms and existential propositions.
inline Formula random_pi1_3cnf(Rng& rng) {
  QuantifierList qs;
  std::vector<Term> xs;
  std::vector<Var> fs;
  int nf = uniform(rng, 1, 2);
  for (int i = 0; i < nf; ++i) {
    fs.push_back(Var{"f" + std::to_string(i), uniform(rng, 1, 2)});
    qs.emplace_back(Quantifier::Forall, fs.back());
  }
  int nx = uniform(rng, 1, 2);
  for (int i = 0; i < nx; ++i) {
    xs.push_back(Term::proposition("x" + std::to_string(i)));
    qs.emplace_back(Quantifier::Exists, xs.back().head());
  }
  std::vector<Term> atoms = xs;
  for (const auto& f : fs) atoms.push_back(Term::variable(f, random_args(rng, f.arity, xs, 0.0)));
  return with_prefix(qs, random_matrix(rng, atoms, 1, 3, 3, false));
}

}  // namespace so2kit::gen

#endif
