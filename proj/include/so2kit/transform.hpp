#ifndef SO2KIT_TRANSFORM_HPP
#define SO2KIT_TRANSFORM_HPP

// Equivalence-preserving rewrites: prenex form, CNF, simpleness, term
// elision, uniqueness and the core-clause reduction.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "so2kit/classify.hpp"
#include "so2kit/core.hpp"

namespace so2kit {

using QuantifierList = std::vector<std::pair<Quantifier, Var>>;

namespace detail {

struct Prenexed {
  QuantifierList prefix;
  Formula matrix;
};

// Renames every bound variable of f to a fresh name.
inline Formula refresh_bound(const Formula& f, FreshNamePool& pool) {
  struct Walk {
    FreshNamePool& pool;
    std::map<Var, Var> sub;
    Formula run(const Formula& g) {
      switch (g.op()) {
        case Op::Atom:
          return Formula::atom(rename_term(g.term(), sub));
        case Op::Const:
          return g;
        case Op::Exists:
        case Op::Forall: {
          Var nv = pool.fresh_var(g.var().name, g.var().arity);
          auto saved = sub;
          sub[g.var()] = nv;
          Formula body = run(g.body());
          sub = std::move(saved);
          return Formula::quantified(g.quantifier(), nv, body);
        }
        default: {
          std::vector<Formula> kids;
          for (const auto& k : g.children()) kids.push_back(run(k));
          return rebuild(g, std::move(kids));
        }
      }
    }
  };
  return Walk{pool, {}}.run(f);
}

inline Prenexed prenex_rec(const Formula& f, FreshNamePool& pool) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Const:
      return {{}, f};
    case Op::Exists:
    case Op::Forall: {
      Prenexed inner = prenex_rec(f.body(), pool);
      inner.prefix.insert(inner.prefix.begin(), {f.quantifier(), f.var()});
      return inner;
    }
    case Op::Not: {
      Prenexed inner = prenex_rec(f.child(0), pool);
      for (auto& q : inner.prefix) q.first = dual(q.first);
      inner.matrix = Formula::negation(inner.matrix);
      return inner;
    }
    case Op::Implies:
      return prenex_rec(Formula::disj({Formula::negation(f.child(0)), f.child(1)}), pool);
    case Op::Iff: {
      if (is_quantifier_free(f)) return {{}, f};
      const Formula& a = f.child(0);
      const Formula& b = f.child(1);
      Formula a2 = refresh_bound(a, pool);
      Formula b2 = refresh_bound(b, pool);
      Formula expanded = Formula::conj({Formula::disj({Formula::negation(a), b}), Formula::disj({Formula::negation(b2), a2})});
      return prenex_rec(expanded, pool);
    }
    case Op::And:
    case Op::Or: {
      Prenexed out;
      std::vector<Formula> kids;
      for (const auto& k : f.children()) {
        Prenexed p = prenex_rec(k, pool);
        out.prefix.insert(out.prefix.end(), p.prefix.begin(), p.prefix.end());
        kids.push_back(p.matrix);
      }
      out.matrix = rebuild(f, std::move(kids));
      return out;
    }
  }
  return {{}, f};
}

}  // namespace detail

/// Prenex form by quantifier extraction after renaming bound variables apart.
/// A formula that is already prenex is returned unchanged.
inline Formula to_prenex(const Formula& f) {
  if (is_prenex(f)) return f;
  Formula g = rename_apart(f);
  FreshNamePool pool(g);
  detail::Prenexed p = detail::prenex_rec(g, pool);
  return with_prefix(p.prefix, p.matrix);
}

namespace detail {

using Clauses = std::vector<Clause>;

class CnfBuilder {
 public:
  explicit CnfBuilder(FreshNamePool& pool, std::size_t limit = 64) : pool_(pool), limit_(limit) {}

  // Clauses of f (positive) or of its negation. No clauses means true; the
  // empty clause means false.
  Clauses run(const Formula& f, bool positive) {
    switch (f.op()) {
      case Op::Atom:
        return {{Literal{f.term(), positive}}};
      case Op::Const:
        return f.value() == positive ? Clauses{} : Clauses{Clause{}};
      case Op::Not:
        return run(f.child(0), !positive);
      case Op::And:
      case Op::Or: {
        bool conjunctive = (f.op() == Op::And) == positive;
        std::vector<Clauses> parts;
        for (const auto& k : f.children()) parts.push_back(run(k, positive));
        return conjunctive ? conjoin(parts) : disjoin(parts);
      }
      case Op::Implies: {
        Formula alt = Formula::disj({Formula::negation(f.child(0)), f.child(1)});
        return run(alt, positive);
      }
      case Op::Iff: {
        const Formula& a = f.child(0);
        const Formula& b = f.child(1);
        Formula alt = positive ? Formula::conj({Formula::disj({Formula::negation(a), b}), Formula::disj({Formula::negation(b), a})})
                               : Formula::conj({Formula::disj({a, b}), Formula::disj({Formula::negation(a), Formula::negation(b)})});
        return run(alt, true);
      }
      default:
        throw FragmentError("to_cnf: matrix contains a quantifier");
    }
  }

  const std::vector<Var>& aux() const { return aux_; }

 private:
  static Clauses conjoin(const std::vector<Clauses>& parts) {
    Clauses out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  }

  Clauses disjoin(std::vector<Clauses> parts) {
    for (const auto& p : parts)
      if (p.empty()) return {};
    Clauses acc{Clause{}};
    Clauses defs;
    for (auto& p : parts) {
      if (p.size() > 1 && acc.size() * p.size() > limit_) {
        Var a = pool_.fresh_var("aux", 0);
        aux_.push_back(a);
        Literal la{Term::variable(a), true};
        for (auto& c : p) {
          Clause d{la.negated()};
          d.insert(d.end(), c.begin(), c.end());
          defs.push_back(std::move(d));
        }
        p = Clauses{Clause{la}};
      }
      Clauses next;
      next.reserve(acc.size() * p.size());
      for (const auto& x : acc)
        for (const auto& y : p) {
          Clause c = x;
          bool tautology = false;
          for (const auto& l : y) {
            if (std::find(c.begin(), c.end(), l.negated()) != c.end()) tautology = true;
            if (std::find(c.begin(), c.end(), l) == c.end()) c.push_back(l);
          }
          if (!tautology) next.push_back(std::move(c));
        }
      acc = std::move(next);
    }
    acc.insert(acc.end(), defs.begin(), defs.end());
    return acc;
  }

  FreshNamePool& pool_;
  std::size_t limit_;
  std::vector<Var> aux_;
};

// Index in the quantifier list where the trailing propositional block starts
// (the list size when there is none).
inline std::size_t trailing_start(const QuantifierList& qs) {
  if (qs.empty()) return 0;
  std::size_t i = qs.size();
  Quantifier q = qs.back().first;
  while (i > 0 && qs[i - 1].first == q) --i;
  for (std::size_t j = i; j < qs.size(); ++j)
    if (!qs[j].second.is_proposition()) return qs.size();
  return i;
}

inline Term substitute_term(const Term& t, const std::map<Var, Term>& sub) {
  if (t.is_constant()) return t;
  if (t.is_variable() && t.args().empty()) {
    auto it = sub.find(t.head());
    if (it != sub.end()) return it->second;
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(substitute_term(a, sub));
  if (t.is_table()) return Term::table(t.table_ptr(), std::move(args));
  return Term::variable(t.head(), std::move(args));
}

}  // namespace detail

/// Prenex formula with a CNF matrix. Iff and implication over literals expand
/// directly; auxiliary existential propositions are introduced only where
/// distribution would blow up. When the trailing block is universal they
/// become functions of that block, quantified just before it.
inline Formula to_cnf(const Formula& formula) {
  Formula f = to_prenex(formula);
  Prefix p = split_prefix(f);
  if (as_cnf(p.matrix)) return f;
  FreshNamePool pool(f);
  detail::CnfBuilder builder(pool);
  detail::Clauses clauses = builder.run(p.matrix, true);
  QuantifierList qs = p.quantifiers;
  const auto& aux = builder.aux();
  if (!aux.empty()) {
    std::size_t ts = detail::trailing_start(qs);
    bool universal_tail = ts < qs.size() && qs.back().first == Quantifier::Forall;
    if (universal_tail) {
      std::vector<Term> xs;
      for (std::size_t j = ts; j < qs.size(); ++j) xs.push_back(Term::variable(qs[j].second));
      std::map<Var, Term> sub;
      QuantifierList lifted;
      for (const auto& a : aux) {
        Var fa{a.name, static_cast<int>(xs.size())};
        sub[a] = Term::variable(fa, xs);
        lifted.emplace_back(Quantifier::Exists, fa);
      }
      for (auto& c : clauses)
        for (auto& l : c) l.term = detail::substitute_term(l.term, sub);
      qs.insert(qs.begin() + static_cast<long>(ts), lifted.begin(), lifted.end());
    } else {
      for (const auto& a : aux) qs.emplace_back(Quantifier::Exists, a);
    }
  }
  return with_prefix(qs, cnf_formula(clauses));
}

/// True when make_simple keeps the prefix class of f: either f is already
/// simple, or the new existential propositions join an existential tail.
inline bool simple_preserves_fragment(const Formula& f) {
  FragmentProfile prof = classify(f);
  return prof.is_simple || prof.final_prop_block != PropBlock::Universal;
}

namespace detail {

struct Simplifier {
  FreshNamePool& pool;
  std::map<Term, Var> names;
  std::vector<Var> order;
  std::vector<std::pair<Var, Term>> defs;

  // Rewrites a term so that none of its arguments is an application.
  Term flatten(const Term& t) {
    if (t.is_constant() || t.args().empty()) return t;
    std::vector<Term> args;
    for (const auto& a : t.args()) {
      if (a.is_application()) {
        Term inner = flatten(a);
        auto it = names.find(inner);
        if (it == names.end()) {
          Var y = pool.fresh_var("y", 0);
          it = names.emplace(inner, y).first;
          defs.emplace_back(y, inner);
        }
        args.push_back(Term::variable(it->second));
      } else {
        args.push_back(a);
      }
    }
    if (t.is_table()) return Term::table(t.table_ptr(), std::move(args));
    return Term::variable(t.head(), std::move(args));
  }

  Formula run(const Formula& f) {
    if (f.op() == Op::Atom) return Formula::atom(flatten(f.term()));
    if (f.op() == Op::Const) return f;
    std::vector<Formula> kids;
    for (const auto& k : f.children()) kids.push_back(run(k));
    return rebuild(f, std::move(kids));
  }
};

}  // namespace detail

/// Simple formula equivalent to a prenex f: each distinct nested application
/// gets an innermost existential proposition y with (~y | t) & (~t | y).
inline Formula make_simple(const Formula& f) {
  if (!is_prenex(f)) throw FragmentError("make_simple requires a prenex formula");
  if (classify(f).is_simple) return f;
  Prefix p = split_prefix(f);
  FreshNamePool pool(f);
  detail::Simplifier s{pool, {}, {}, {}};
  Formula body = s.run(p.matrix);
  std::vector<Clause> extra;
  for (const auto& [y, t] : s.defs) {
    Literal ly{Term::variable(y), true};
    Literal lt{t, true};
    extra.push_back({ly.negated(), lt});
    extra.push_back({lt.negated(), ly});
  }
  Formula matrix;
  if (auto cnf = as_cnf(body)) {
    cnf->insert(cnf->end(), extra.begin(), extra.end());
    matrix = cnf_formula(*cnf);
  } else {
    std::vector<Formula> parts{body};
    for (const auto& c : extra) parts.push_back(clause_formula(c));
    matrix = Formula::conj(std::move(parts));
  }
  QuantifierList qs = p.quantifiers;
  for (const auto& [y, t] : s.defs) qs.emplace_back(Quantifier::Exists, y);
  return with_prefix(qs, matrix);
}

/// Removes from the quantified function f every argument position holding t.
/// Requires f to occur with a single argument tuple, and t to be free or to
/// mention only variables quantified before f.
inline Formula elide(const Formula& formula, const Var& f, const Term& t) {
  if (!is_prenex(formula)) throw FragmentError("elide requires a prenex formula");
  Prefix p = split_prefix(formula);
  auto pos = std::find_if(p.quantifiers.begin(), p.quantifiers.end(), [&](const auto& q) { return q.second == f; });
  if (pos == p.quantifiers.end()) throw FragmentError("elide: " + to_string(f) + " is not quantified");
  std::optional<Term> tuple;
  bool unique = true;
  detail::for_each_term(p.matrix, [&](const Term& u) {
    if (!u.is_variable() || !(u.head() == f)) return;
    if (!tuple) tuple = u;
    else if (!(*tuple == u)) unique = false;
  });
  if (!unique) throw FragmentError("elide: " + to_string(f) + " occurs with different argument tuples");
  std::set<Var> before;
  for (auto it = p.quantifiers.begin(); it != pos; ++it) before.insert(it->second);
  std::set<Var> bound;
  for (const auto& q : p.quantifiers) bound.insert(q.second);
  bool ok = true;
  detail::for_each_term(t, [&](const Term& u) {
    if (u.is_variable() && bound.contains(u.head()) && !before.contains(u.head())) ok = false;
  });
  if (!ok) throw FragmentError("elide: the elided term mentions a variable not quantified before " + to_string(f));
  if (!tuple) return formula;
  std::vector<bool> drop;
  int kept = 0;
  for (const auto& a : tuple->args()) {
    drop.push_back(a == t);
    kept += a == t ? 0 : 1;
  }
  if (kept == f.arity) return formula;
  FreshNamePool pool(formula);
  Var g = pool.fresh_var(f.name, kept);
  std::vector<Term> args;
  for (std::size_t i = 0; i < drop.size(); ++i)
    if (!drop[i]) args.push_back(tuple->args()[i]);
  Term replacement = Term::variable(g, std::move(args));
  struct Walk {
    const Var& f;
    const Term& replacement;
    Term term(const Term& u) const {
      if (u.is_variable() && u.head() == f) return replacement;
      if (u.is_constant() || u.args().empty()) return u;
      std::vector<Term> as;
      for (const auto& a : u.args()) as.push_back(term(a));
      if (u.is_table()) return Term::table(u.table_ptr(), std::move(as));
      return Term::variable(u.head(), std::move(as));
    }
    Formula run(const Formula& h) const {
      if (h.op() == Op::Atom) return Formula::atom(term(h.term()));
      if (h.op() == Op::Const) return h;
      std::vector<Formula> kids;
      for (const auto& k : h.children()) kids.push_back(run(k));
      return detail::rebuild(h, std::move(kids));
    }
  };
  Formula matrix = Walk{f, replacement}.run(p.matrix);
  QuantifierList qs = p.quantifiers;
  for (auto& q : qs)
    if (q.second == f) q.second = g;
  return with_prefix(qs, matrix);
}

}  // namespace so2kit

#include "so2kit/transform_unique_core.hpp"

#endif
