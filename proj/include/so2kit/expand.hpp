#ifndef SO2KIT_EXPAND_HPP
#define SO2KIT_EXPAND_HPP

// Universal expansion of existential level-one formulas into propositional
// Horn/Krom problems, and elimination of outer quantifier blocks by
// exhaustive table enumeration.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "so2kit/classify.hpp"
#include "so2kit/core.hpp"
#include "so2kit/eval.hpp"
#include "so2kit/propsat.hpp"
#include "so2kit/scc.hpp"
#include "so2kit/transform.hpp"

namespace so2kit {

/// Propositional problem over y variables, one per existential function and
/// input tuple, with the clause set of every universal assignment.
struct ExpansionProblem {
  struct YVar {
    Var function;
    std::vector<bool> tuple;
  };
  struct Origin {
    std::size_t source_clause;
    std::vector<bool> assignment;  ///< values of the universal propositions
  };
  PropCnf cnf;                 ///< variable v stands for y_vars[v-1]
  std::vector<YVar> y_vars;
  std::vector<Origin> provenance;  ///< provenance[i] is the origin of cnf.clauses[i]
  std::vector<Clause> source;      ///< clauses of the residual matrix
  std::vector<Var> universal;      ///< universal propositions in enumeration order
};

/// Counters reported by the expansion engines.
struct ExpansionStats {
  std::size_t leaves = 0;
  std::size_t y_vars = 0;
  std::size_t universal_vars = 0;
  std::size_t clauses = 0;
  bool streamed = false;
  std::string subsolver;
  bool verdict = false;
};

namespace detail {

struct GroundTerm {
  enum class Kind { Const, Universal, Free, Existential, Table };
  Kind kind = Kind::Const;
  bool value = false;
  int index = 0;  ///< universal position or existential function index
  const TruthTable* table = nullptr;
  std::vector<GroundTerm> args;
};

// Compiled residual formula: exists f... forall x... theta with free
// variables bound by an interpretation.
class Expander {
 public:
  Expander(const Formula& phi, const Interpretation& interp) : interp_(interp) {
    Prefix p = split_prefix(phi);
    if (!is_quantifier_free(p.matrix)) throw FragmentError("expansion requires a prenex formula");
    std::size_t i = 0;
    for (; i < p.quantifiers.size() && p.quantifiers[i].first == Quantifier::Exists; ++i) {
      const Var& f = p.quantifiers[i].second;
      if (f.arity > TruthTable::kMaxArity) throw InfeasibleError("function arity too large for expansion");
      exist_index_[f] = static_cast<int>(existential.size());
      existential.push_back(f);
      offset.push_back(num_y);
      num_y += 1 << f.arity;
    }
    for (; i < p.quantifiers.size(); ++i) {
      const auto& [q, x] = p.quantifiers[i];
      if (q != Quantifier::Forall || x.arity != 0)
        throw FragmentError("expansion requires the shape exists functions, then forall propositions");
      univ_index_[x] = static_cast<int>(universal.size());
      universal.push_back(x);
    }
    auto cnf = as_cnf(p.matrix);
    if (!cnf) throw FragmentError("expansion requires a CNF matrix");
    source = *cnf;
    for (const auto& c : source) {
      std::vector<std::pair<GroundTerm, bool>> cc;
      for (const auto& l : c) cc.emplace_back(compile(l.term, false), l.positive);
      compiled.push_back(std::move(cc));
    }
  }

  /// Ground instance of clause i under the universal assignment `b`
  /// (universal j is bit n-1-j). Returns false when the clause is satisfied
  /// by constants; otherwise `out` holds its DIMACS literals.
  bool ground(std::size_t i, std::uint64_t b, std::vector<int>& out) const {
    out.clear();
    for (const auto& [t, positive] : compiled[i]) {
      if (t.kind == GroundTerm::Kind::Existential) {
        int v = y_of(t, b) + 1;
        int lit = positive ? v : -v;
        if (std::find(out.begin(), out.end(), lit) == out.end()) out.push_back(lit);
      } else if (value(t, b) == positive) {
        return false;
      }
    }
    return true;
  }

  std::uint64_t assignments() const { return std::uint64_t{1} << universal.size(); }

  std::vector<bool> assignment(std::uint64_t b) const {
    std::vector<bool> out(universal.size());
    for (std::size_t j = 0; j < universal.size(); ++j) out[j] = ((b >> (universal.size() - 1 - j)) & 1U) != 0;
    return out;
  }

  ExpansionProblem::YVar y_var(int v) const {
    int f = static_cast<int>(std::upper_bound(offset.begin(), offset.end(), v - 1) - offset.begin()) - 1;
    return {existential[f], TruthTable::tuple_of(static_cast<std::size_t>(v - 1 - offset[f]), existential[f].arity)};
  }

  /// Zero-based y index of an existential application under `b`.
  int y_of(const GroundTerm& t, std::uint64_t b) const {
    std::size_t idx = 0;
    for (const auto& a : t.args) idx = (idx << 1) | (value(a, b) ? 1U : 0U);
    return offset[static_cast<std::size_t>(t.index)] + static_cast<int>(idx);
  }

  bool value(const GroundTerm& t, std::uint64_t b) const {
    switch (t.kind) {
      case GroundTerm::Kind::Const:
        return t.value;
      case GroundTerm::Kind::Universal:
        return ((b >> (universal.size() - 1 - static_cast<std::size_t>(t.index))) & 1U) != 0;
      default: {
        std::size_t idx = 0;
        for (const auto& a : t.args) idx = (idx << 1) | (value(a, b) ? 1U : 0U);
        return (*t.table)[idx];
      }
    }
  }

  std::vector<Var> existential;
  std::vector<int> offset;
  int num_y = 0;
  std::vector<Var> universal;
  std::vector<Clause> source;
  std::vector<std::vector<std::pair<GroundTerm, bool>>> compiled;

 private:
  GroundTerm compile(const Term& t, bool nested) const {
    GroundTerm g;
    if (t.is_constant()) {
      g.value = t.value();
      return g;
    }
    for (const auto& a : t.args()) g.args.push_back(compile(a, true));
    if (t.is_table()) {
      g.kind = GroundTerm::Kind::Table;
      g.table = &t.fixed_table();
      return g;
    }
    if (auto it = exist_index_.find(t.head()); it != exist_index_.end()) {
      if (nested) throw FragmentError("expansion requires simpleness: " + to_string(t.head()) + " occurs nested");
      for (const auto& a : g.args)
        if (contains_existential(a)) throw FragmentError("expansion requires simpleness: nested existential function");
      g.kind = GroundTerm::Kind::Existential;
      g.index = it->second;
      return g;
    }
    if (auto it = univ_index_.find(t.head()); it != univ_index_.end()) {
      g.kind = GroundTerm::Kind::Universal;
      g.index = it->second;
      return g;
    }
    g.kind = GroundTerm::Kind::Free;
    g.table = &interp_.at(t.head());
    return g;
  }

  static bool contains_existential(const GroundTerm& g) {
    if (g.kind == GroundTerm::Kind::Existential) return true;
    for (const auto& a : g.args)
      if (contains_existential(a)) return true;
    return false;
  }

  const Interpretation& interp_;
  std::map<Var, int> exist_index_;
  std::map<Var, int> univ_index_;
};

inline void require_universal_cap(const Expander& e, int cap, const char* what) {
  if (static_cast<int>(e.universal.size()) > cap)
    throw InfeasibleError(std::string(what) + ": " + std::to_string(e.universal.size()) +
                          " universal propositions exceed the cap " + std::to_string(cap));
}

}  // namespace detail

/// Materialized universal expansion of phi = exists f forall x theta, with the
/// free variables of phi read from interp. Assignments are enumerated in
/// ascending integer order.
inline ExpansionProblem universal_expansion(const Formula& phi, const Interpretation& interp = {},
                                            const Caps& caps = caps_from_env()) {
  detail::Expander e(phi, interp);
  detail::require_universal_cap(e, caps.materialize_vars, "materialized expansion");
  ExpansionProblem p;
  p.cnf.num_vars = e.num_y;
  for (int v = 1; v <= e.num_y; ++v) p.y_vars.push_back(e.y_var(v));
  p.source = e.source;
  p.universal = e.universal;
  std::vector<int> lits;
  for (std::uint64_t b = 0; b < e.assignments(); ++b)
    for (std::size_t i = 0; i < e.source.size(); ++i)
      if (e.ground(i, b, lits)) {
        p.cnf.clauses.push_back(lits);
        p.provenance.push_back({i, e.assignment(b)});
      }
  return p;
}

namespace detail {

inline void require_sigma1(const Formula& f, bool horn) {
  FragmentProfile p = classify(f);
  if (!p.is_prenex || !p.is_cnf) throw FragmentError("expansion engine requires a prenex CNF formula");
  if (!p.is_simple) throw FragmentError("expansion engine requires a simple formula");
  if (horn ? !p.is_horn : !p.is_krom)
    throw FragmentError(std::string("expansion engine requires a ") + (horn ? "Horn" : "Krom") + " matrix");
}

// Implication graph over y literals, built from streamed ground clauses with
// duplicate edges removed; its size is independent of the number of
// universal assignments.
inline bool stream_two_sat(const Expander& e, ExpansionStats* stats) {
  const std::uint64_t n = 2 * static_cast<std::uint64_t>(e.num_y);
  auto node = [](int lit) { return static_cast<std::uint64_t>(lit > 0 ? 2 * (lit - 1) : 2 * (-lit - 1) + 1); };
  std::unordered_set<std::uint64_t> edges;
  std::vector<int> lits;
  for (std::uint64_t b = 0; b < e.assignments(); ++b)
    for (std::size_t i = 0; i < e.source.size(); ++i) {
      if (!e.ground(i, b, lits)) continue;
      if (lits.empty()) {
        if (stats) stats->clauses = edges.size();
        return false;
      }
      int a = lits[0], c = lits.size() == 2 ? lits[1] : lits[0];
      edges.insert(node(-a) * n + node(c));
      edges.insert(node(-c) * n + node(a));
    }
  Digraph g(n);
  for (std::uint64_t ed : edges) g[ed / n].push_back(static_cast<int>(ed % n));
  if (stats) stats->clauses = edges.size();
  SccResult scc = strongly_connected_components(g);
  for (std::uint64_t v = 0; v < n; v += 2)
    if (scc.comp[v] == scc.comp[v + 1]) return false;
  return true;
}

inline void collect_universals(const GroundTerm& t, std::vector<int>& out) {
  if (t.kind == GroundTerm::Kind::Universal && std::find(out.begin(), out.end(), t.index) == out.end())
    out.push_back(t.index);
  for (const auto& a : t.args) collect_universals(a, out);
}

// Forward chaining to the least model of the implicit Horn expansion. Ground
// instances are produced by a depth-first search over the universal
// propositions that abandons a branch as soon as a determined body atom is
// underived or a determined side literal satisfies the clause, so only
// instances whose bodies hold are ever visited.
inline bool lazy_horn_sat(const Expander& e, ExpansionStats* stats) {
  struct Rule {
    std::vector<int> order;                              // universal indices in binding order
    std::vector<std::vector<std::size_t>> checks;        // literals determined at each depth
    int head = -1;
  };
  const auto& cs = e.compiled;
  std::vector<Rule> rules(cs.size());
  for (std::size_t r = 0; r < cs.size(); ++r) {
    Rule& rule = rules[r];
    std::vector<std::vector<int>> vars(cs[r].size());
    for (std::size_t i = 0; i < cs[r].size(); ++i) {
      collect_universals(cs[r][i].first, vars[i]);
      if (cs[r][i].first.kind == GroundTerm::Kind::Existential && cs[r][i].second) {
        if (rule.head >= 0) throw FragmentError("horn expansion: clause with two positive literals");
        rule.head = static_cast<int>(i);
      }
    }
    std::vector<char> bound(e.universal.size(), 0);
    auto unbound = [&](std::size_t i) {
      int n = 0;
      for (int v : vars[i]) n += bound[v] ? 0 : 1;
      return n;
    };
    std::vector<char> used(cs[r].size(), 0);
    for (;;) {
      std::size_t best = cs[r].size();
      for (std::size_t i = 0; i < cs[r].size(); ++i)
        if (!used[i] && static_cast<int>(i) != rule.head && (best == cs[r].size() || unbound(i) < unbound(best)))
          best = i;
      if (best == cs[r].size()) break;
      used[best] = 1;
      for (int v : vars[best])
        if (!bound[v]) {
          bound[v] = 1;
          rule.order.push_back(v);
        }
    }
    for (std::size_t v = 0; v < e.universal.size(); ++v)
      if (!bound[v]) rule.order.push_back(static_cast<int>(v));
    std::vector<int> depth_of(e.universal.size(), 0);
    for (std::size_t d = 0; d < rule.order.size(); ++d) depth_of[rule.order[d]] = static_cast<int>(d) + 1;
    rule.checks.resize(rule.order.size() + 1);
    for (std::size_t i = 0; i < cs[r].size(); ++i) {
      if (static_cast<int>(i) == rule.head) continue;
      int d = 0;
      for (int v : vars[i]) d = std::max(d, depth_of[v]);
      rule.checks[d].push_back(i);
    }
  }

  const std::size_t n = e.universal.size();
  std::vector<char> model(static_cast<std::size_t>(e.num_y), 0);
  std::size_t fired = 0;
  bool changed = true, conflict = false;
  while (changed && !conflict) {
    changed = false;
    for (std::size_t r = 0; r < rules.size() && !conflict; ++r) {
      const Rule& rule = rules[r];
      std::function<void(std::size_t, std::uint64_t)> dfs = [&](std::size_t depth, std::uint64_t b) {
        if (conflict) return;
        for (std::size_t i : rule.checks[depth]) {
          const auto& [t, positive] = cs[r][i];
          if (t.kind == GroundTerm::Kind::Existential) {
            if (positive || !model[e.y_of(t, b)]) return;
          } else if (e.value(t, b) == positive) {
            return;
          }
        }
        if (depth == rule.order.size()) {
          ++fired;
          if (rule.head < 0) {
            conflict = true;
            return;
          }
          int y = e.y_of(cs[r][rule.head].first, b);
          if (!model[y]) {
            model[y] = 1;
            changed = true;
          }
          return;
        }
        std::uint64_t bit = std::uint64_t{1} << (n - 1 - static_cast<std::size_t>(rule.order[depth]));
        dfs(depth + 1, b);
        dfs(depth + 1, b | bit);
      };
      dfs(0, 0);
    }
  }
  if (stats) stats->clauses = fired;
  return !conflict;
}

enum class LeafEngine { Horn, HornMaterialized, HornLazy, KromMaterialized, KromStream, KromAuto };

inline bool solve_leaf(const Formula& phi, const Interpretation& interp, LeafEngine engine, const Caps& caps,
                       ExpansionStats* stats) {
  Expander e(phi, interp);
  if (engine == LeafEngine::Horn)
    engine = static_cast<int>(e.universal.size()) > caps.materialize_vars ? LeafEngine::HornLazy
                                                                           : LeafEngine::HornMaterialized;
  if (engine == LeafEngine::KromAuto)
    engine = static_cast<int>(e.universal.size()) > caps.materialize_vars ? LeafEngine::KromStream
                                                                           : LeafEngine::KromMaterialized;
  bool verdict;
  if (engine == LeafEngine::KromStream) {
    require_universal_cap(e, caps.stream_vars, "streaming expansion");
    verdict = stream_two_sat(e, stats);
  } else if (engine == LeafEngine::HornLazy) {
    require_universal_cap(e, caps.stream_vars, "lazy expansion");
    verdict = lazy_horn_sat(e, stats);
  } else {
    ExpansionProblem p = universal_expansion(phi, interp, caps);
    if (stats) stats->clauses = p.cnf.clauses.size();
    verdict = engine == LeafEngine::HornMaterialized ? horn_sat(p.cnf).sat : two_sat(p.cnf).sat;
  }
  if (stats) {
    ++stats->leaves;
    stats->y_vars = static_cast<std::size_t>(e.num_y);
    stats->universal_vars = e.universal.size();
    stats->streamed = engine == LeafEngine::KromStream || engine == LeafEngine::HornLazy || stats->streamed;
    bool horn = engine == LeafEngine::HornMaterialized || engine == LeafEngine::HornLazy;
    stats->subsolver = horn ? "horn_sat" : "two_sat";
  }
  return verdict;
}

}  // namespace detail

/// Truth of a closed existential level-one simple Horn formula by expansion and
/// HornSAT. The materialized path is used while the universal block fits its
/// cap, lazy forward chaining above it.
inline bool decide_sigma1_sh(const Formula& f, const Caps& caps = caps_from_env(), ExpansionStats* stats = nullptr) {
  detail::require_sigma1(f, true);
  bool v = detail::solve_leaf(f, {}, detail::LeafEngine::Horn, caps, stats);
  if (stats) stats->verdict = v;
  return v;
}

/// Horn decision on an explicit path: lazy forward chaining or the materialized expansion.
inline bool decide_sigma1_sh(const Formula& f, bool lazy, const Caps& caps = caps_from_env(),
                             ExpansionStats* stats = nullptr) {
  detail::require_sigma1(f, true);
  auto engine = lazy ? detail::LeafEngine::HornLazy : detail::LeafEngine::HornMaterialized;
  bool v = detail::solve_leaf(f, {}, engine, caps, stats);
  if (stats) stats->verdict = v;
  return v;
}

/// Truth of a closed existential level-one simple Krom formula. The streaming
/// path never stores the expanded clause set.
inline bool decide_sigma1_sk(const Formula& f, bool stream, const Caps& caps = caps_from_env(),
                             ExpansionStats* stats = nullptr) {
  detail::require_sigma1(f, false);
  auto engine = stream ? detail::LeafEngine::KromStream : detail::LeafEngine::KromMaterialized;
  bool v = detail::solve_leaf(f, {}, engine, caps, stats);
  if (stats) stats->verdict = v;
  return v;
}

/// Krom decision choosing the materialized path when the universal block fits its cap.
inline bool decide_sigma1_sk(const Formula& f, const Caps& caps = caps_from_env(), ExpansionStats* stats = nullptr) {
  detail::require_sigma1(f, false);
  bool v = detail::solve_leaf(f, {}, detail::LeafEngine::KromAuto, caps, stats);
  if (stats) stats->verdict = v;
  return v;
}

/// Splits a prenex quantifier list into the outer part and the residual
/// suffix exists f... forall x... (x propositional).
inline std::pair<QuantifierList, QuantifierList> split_outer(const QuantifierList& qs) {
  std::size_t i = qs.size();
  while (i > 0 && qs[i - 1].first == Quantifier::Forall && qs[i - 1].second.arity == 0) --i;
  while (i > 0 && qs[i - 1].first == Quantifier::Exists) --i;
  return {QuantifierList(qs.begin(), qs.begin() + static_cast<long>(i)),
          QuantifierList(qs.begin() + static_cast<long>(i), qs.end())};
}

/// Alternating enumeration of every table for the outer quantified variables
/// (universal: all must succeed, existential: one must), in ascending order;
/// each leaf receives the outer interpretation and the residual formula.
inline bool eliminate_outer_blocks(const Formula& f, const Caps& caps,
                                   const std::function<bool(const Interpretation&, const Formula&)>& leaf) {
  if (!is_prenex(f)) throw FragmentError("outer-block elimination requires a prenex formula");
  Prefix p = split_prefix(f);
  auto [outer, inner] = split_outer(p.quantifiers);
  for (const auto& [q, v] : outer)
    if (v.arity > caps.outer_arity)
      throw InfeasibleError("outer function " + to_string(v) + " exceeds the arity cap " + std::to_string(caps.outer_arity));
  Formula residual = with_prefix(inner, p.matrix);
  Interpretation interp;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == outer.size()) return leaf(interp, residual);
    const auto& [q, v] = outer[i];
    const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << v.arity);
    for (std::uint64_t bits = 0; bits < count; ++bits) {
      interp.assign(v, TruthTable::from_bits(v.arity, bits));
      bool r = rec(i + 1);
      if (q == Quantifier::Exists && r) return true;
      if (q == Quantifier::Forall && !r) return false;
    }
    return q == Quantifier::Forall;
  };
  return rec(0);
}

/// Truth of a closed simple Horn or Krom formula whose innermost function
/// block is existential, optionally followed by universal propositions.
inline bool decide_pik_horn_krom(const Formula& f, bool stream = false, const Caps& caps = caps_from_env(),
                                 ExpansionStats* stats = nullptr) {
  FragmentProfile p = classify(f);
  if (!p.is_prenex || !p.is_cnf) throw FragmentError("expansion engine requires a prenex CNF formula");
  if (!p.is_simple) throw FragmentError("expansion engine requires a simple formula");
  if (!p.is_horn && !p.is_krom) throw FragmentError("expansion engine requires a Horn or Krom matrix");
  if (!p.is_closed) throw FragmentError("expansion engine requires a closed formula");
  auto engine = p.is_horn && !(stream && p.is_krom) ? (stream ? detail::LeafEngine::HornLazy : detail::LeafEngine::Horn)
                : stream                             ? detail::LeafEngine::KromStream
                                                     : detail::LeafEngine::KromAuto;
  bool v = eliminate_outer_blocks(f, caps, [&](const Interpretation& interp, const Formula& residual) {
    return detail::solve_leaf(residual, interp, engine, caps, stats);
  });
  if (stats) stats->verdict = v;
  return v;
}

}  // namespace so2kit

#endif
