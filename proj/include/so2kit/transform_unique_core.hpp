#ifndef SO2KIT_TRANSFORM_UNIQUE_CORE_HPP
#define SO2KIT_TRANSFORM_UNIQUE_CORE_HPP

// Uniqueness rewriting and the reduction of a CNF to core clauses.
// Included from transform.hpp.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "so2kit/classify.hpp"
#include "so2kit/core.hpp"

namespace so2kit {

namespace detail {

inline Formula equal_to(const Term& z, const Term& a) {
  Formula fz = Formula::atom(z);
  Formula fa = a.is_constant() ? Formula::constant(a.value()) : Formula::atom(a);
  return Formula::iff(fz, fa);
}

// Argument tuples of h in first-occurrence order.
inline std::vector<Term> tuples_of(const Formula& f, const Var& h) {
  std::vector<Term> out;
  for_each_term(f, [&](const Term& t) {
    if (t.is_variable() && t.head() == h && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  });
  return out;
}

inline std::optional<Var> first_non_unique(const Formula& f) {
  std::map<Var, Term> seen;
  std::optional<Var> bad;
  for_each_term(f, [&](const Term& t) {
    if (bad || !t.is_variable() || t.head().arity == 0) return;
    auto [it, fresh] = seen.emplace(t.head(), t);
    if (!fresh && !(it->second == t)) bad = t.head();
  });
  return bad;
}

// Replaces every occurrence of h(a_i) by h_i(z_i), innermost first.
struct UniqueRewriter {
  const Var& h;
  const std::map<Term, Term>& copies;

  Term term(const Term& t) const {
    if (t.is_constant() || t.args().empty()) return t;
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(term(a));
    if (t.is_table()) return Term::table(t.table_ptr(), std::move(args));
    if (t.head() == h) {
      auto it = copies.find(t);
      if (it != copies.end()) return it->second;
    }
    return Term::variable(t.head(), std::move(args));
  }

  Formula run(const Formula& f) const {
    if (f.op() == Op::Atom) return Formula::atom(term(f.term()));
    if (f.op() == Op::Const) return f;
    std::vector<Formula> kids;
    for (const auto& k : f.children()) kids.push_back(run(k));
    return rebuild(f, std::move(kids));
  }
};

inline Formula unique_step(const Formula& f, const Var& h, FreshNamePool& pool) {
  Prefix p = split_prefix(f);
  QuantifierList qs = p.quantifiers;
  std::size_t ts = trailing_start(qs);
  bool existential_tail;
  if (ts < qs.size())
    existential_tail = qs.back().first == Quantifier::Exists;
  else
    existential_tail = !qs.empty() && qs.back().first == Quantifier::Forall;

  std::vector<Term> tuples = tuples_of(p.matrix, h);
  std::vector<Term> z;
  for (int j = 0; j < h.arity; ++j) z.push_back(Term::variable(pool.fresh_var("z", 0)));
  std::vector<Var> copies;
  std::vector<std::vector<Term>> zi(tuples.size());
  std::map<Term, Term> copy_of;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    copies.push_back(pool.fresh_var(h.name, h.arity));
    for (int j = 0; j < h.arity; ++j) zi[i].push_back(Term::variable(pool.fresh_var("z", 0)));
  }
  // Rewrite bottom-up: a nested h(a_j) inside another tuple becomes h_j(z_j).
  for (std::size_t i = 0; i < tuples.size(); ++i) copy_of[tuples[i]] = Term::variable(copies[i], zi[i]);
  UniqueRewriter rw{h, copy_of};

  std::vector<Formula> guards;
  std::vector<Formula> binds;
  Term hz = Term::variable(h, z);
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    std::vector<Formula> same;
    for (int j = 0; j < h.arity; ++j) same.push_back(equal_to(z[j], zi[i][j]));
    Formula eq = Formula::iff(Formula::atom(hz), Formula::atom(Term::variable(copies[i], zi[i])));
    if (existential_tail)
      guards.push_back(Formula::conj({Formula::conj(same), Formula::negation(eq)}));
    else
      guards.push_back(Formula::implies(Formula::conj(same), eq));
    for (int j = 0; j < h.arity; ++j) binds.push_back(equal_to(zi[i][j], rw.term(tuples[i].args()[j])));
  }
  Formula theta = rw.run(p.matrix);
  Formula matrix = existential_tail
                       ? Formula::disj({Formula::disj(guards), Formula::conj({Formula::conj(binds), theta})})
                       : Formula::conj({Formula::conj(guards), Formula::implies(Formula::conj(binds), theta)});

  Quantifier outer = existential_tail ? Quantifier::Forall : Quantifier::Exists;
  QuantifierList inserted;
  for (const auto& c : copies) inserted.emplace_back(outer, c);
  qs.insert(qs.begin() + static_cast<long>(ts), inserted.begin(), inserted.end());
  for (const auto& t : z) qs.emplace_back(dual(outer), t.head());
  for (const auto& row : zi)
    for (const auto& t : row) qs.emplace_back(dual(outer), t.head());
  return with_prefix(qs, matrix);
}

}  // namespace detail

/// Equivalent formula in which every function occurs with one argument tuple.
/// Each offending h gets one fresh copy per distinct tuple, constrained to
/// agree with h and placed in the block just before the propositional tail.
inline Formula make_unique(const Formula& f) {
  if (!is_prenex(f)) throw FragmentError("make_unique requires a prenex formula");
  Formula cur = f;
  FreshNamePool pool(f);
  while (auto h = detail::first_non_unique(cur)) cur = detail::unique_step(cur, *h, pool);
  return cur;
}

/// Existential core formula equivalent to a quantifier-free CNF theta:
///   exists h_i, g_t, p_l/1  forall b  (xi(C_i) ... & tau(t) ...)
/// with every proxy p_l applied to the pivot b.
inline Formula to_core(const Formula& theta) {
  if (!is_quantifier_free(theta)) throw FragmentError("to_core requires a quantifier-free formula");
  auto cnf = as_cnf(theta);
  if (!cnf) throw FragmentError("to_core requires a CNF matrix");

  std::vector<Clause> clauses;
  for (const auto& c : *cnf) {
    Clause kept;
    bool satisfied = false;
    for (const auto& l : c) {
      if (l.term.is_constant()) {
        if (l.term.value() == l.positive) satisfied = true;
        continue;
      }
      kept.push_back(l);
    }
    if (!satisfied) clauses.push_back(std::move(kept));
  }
  std::vector<Term> terms;
  for (const auto& c : clauses)
    for (const auto& l : c)
      if (std::find(terms.begin(), terms.end(), l.term) == terms.end()) terms.push_back(l.term);

  FreshNamePool pool(theta);
  Var b = pool.fresh_var("b", 0);
  Term bt = Term::variable(b);
  QuantifierList hs, gs, ps;
  std::map<std::pair<Term, bool>, Term> proxy;
  for (const auto& t : terms) {
    for (bool pos : {true, false}) {
      Var p = pool.fresh_var("p", 1);
      ps.emplace_back(Quantifier::Exists, p);
      proxy[{t, pos}] = Term::variable(p, {bt});
    }
  }
  auto lit = [](const Term& t, bool pos) { return Literal{t, pos}; };
  std::vector<Clause> out;
  for (const auto& c : clauses) {
    Var h = pool.fresh_var("h", static_cast<int>(c.size()));
    hs.emplace_back(Quantifier::Exists, h);
    std::vector<Term> args;
    for (const auto& l : c) args.push_back(proxy.at({l.term, l.positive}));
    Term ht = Term::variable(h, args);
    out.push_back({lit(bt, false), lit(ht, true)});
    out.push_back({lit(ht, false), lit(bt, true)});
    for (const auto& a : args) out.push_back({lit(a, false), lit(ht, true)});
  }
  for (const auto& t : terms) {
    Var g = pool.fresh_var("g", 2);
    gs.emplace_back(Quantifier::Exists, g);
    const Term& pt = proxy.at({t, true});
    const Term& pn = proxy.at({t, false});
    Term gt = Term::variable(g, {pt, pn});
    out.push_back({lit(bt, false), lit(gt, true)});
    out.push_back({lit(gt, false), lit(bt, true)});
    out.push_back({lit(pt, false), lit(gt, true)});
    out.push_back({lit(pn, false), lit(gt, true)});
    out.push_back({lit(pt, false), lit(pn, false)});
    out.push_back({lit(pt, false), lit(t, true)});
    out.push_back({lit(pn, false), lit(t, false)});
  }
  QuantifierList qs = hs;
  qs.insert(qs.end(), gs.begin(), gs.end());
  qs.insert(qs.end(), ps.begin(), ps.end());
  qs.emplace_back(Quantifier::Forall, b);
  return with_prefix(qs, cnf_formula(out));
}

}  // namespace so2kit

#endif
