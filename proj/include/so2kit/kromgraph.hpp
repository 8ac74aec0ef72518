#ifndef SO2KIT_KROMGRAPH_HPP
#define SO2KIT_KROMGRAPH_HPP

// Implication-graph decision procedure for braided, simple, unique Krom
// formulas, with the dependency relation between literals, the four
// component conditions and a constructive marking.

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "so2kit/classify.hpp"
#include "so2kit/core.hpp"
#include "so2kit/scc.hpp"
#include "so2kit/textio.hpp"
#include "so2kit/transform.hpp"

namespace so2kit {

/// Literal vertices (2*atom for the atom, 2*atom+1 for its negation) and
/// implication edges of a Krom matrix.
class ImplicationGraph {
 public:
  struct Atom {
    Term term;
    int head = -1;           ///< variable id of the head
    std::vector<int> args;   ///< variable ids of the (propositional) arguments
  };

  static int negate(int v) { return v ^ 1; }
  static int vertex(int atom, bool negative) { return 2 * atom + (negative ? 1 : 0); }

  int vertex_count() const { return static_cast<int>(adj.size()); }
  int atom_of(int v) const { return v / 2; }
  bool is_negative(int v) const { return (v & 1) != 0; }
  const Atom& atom(int v) const { return atoms[static_cast<std::size_t>(v / 2)]; }
  bool is_universal(int v) const { return universal[static_cast<std::size_t>(atom(v).head)]; }
  int block_of_var(int var) const { return block[static_cast<std::size_t>(var)]; }
  int block_of(int v) const { return block_of_var(atom(v).head); }

  std::string label(int v) const { return (is_negative(v) ? "~" : "") + print(atom(v).term); }

  std::vector<Atom> atoms;
  Digraph adj;
  bool empty_clause = false;  ///< the matrix contains a clause falsified by constants alone
  std::vector<Var> vars;      ///< variable id -> variable
  std::vector<bool> universal;
  std::vector<int> block;     ///< variable id -> block index, -1 when free
  std::vector<QuantifierBlock> blocks;
};

/// Builds the implication graph of a prenex, simple Krom formula. Constant
/// literals are simplified away; a unit clause l yields the edge ~l -> l.
inline ImplicationGraph build_graph(const Formula& f) {
  if (!is_prenex(f)) throw FragmentError("implication graph requires a prenex formula");
  Prefix p = split_prefix(f);
  auto cnf = as_cnf(p.matrix);
  if (!cnf) throw FragmentError("implication graph requires a CNF matrix");
  ImplicationGraph g;
  g.blocks = block_structure(f);
  std::map<Var, int> var_id;
  auto id_of = [&](const Var& v) {
    auto [it, fresh] = var_id.emplace(v, static_cast<int>(g.vars.size()));
    if (fresh) {
      g.vars.push_back(v);
      g.universal.push_back(false);
      g.block.push_back(-1);
    }
    return it->second;
  };
  for (std::size_t i = 0; i < g.blocks.size(); ++i)
    for (const auto& v : g.blocks[i].second) {
      int id = id_of(v);
      g.universal[id] = g.blocks[i].first == Quantifier::Forall;
      g.block[id] = static_cast<int>(i);
    }
  std::map<Term, int> atom_id;
  auto atom_index = [&](const Term& t) {
    auto it = atom_id.find(t);
    if (it != atom_id.end()) return it->second;
    if (!t.is_variable()) throw FragmentError("implication graph: unsupported term " + print(t));
    ImplicationGraph::Atom a;
    a.term = t;
    a.head = id_of(t.head());
    for (const auto& arg : t.args()) {
      if (!arg.is_proposition()) throw FragmentError("implication graph requires a simple formula");
      a.args.push_back(id_of(arg.head()));
    }
    std::sort(a.args.begin(), a.args.end());
    a.args.erase(std::unique(a.args.begin(), a.args.end()), a.args.end());
    int id = static_cast<int>(g.atoms.size());
    g.atoms.push_back(std::move(a));
    g.adj.emplace_back();
    g.adj.emplace_back();
    atom_id.emplace(t, id);
    return id;
  };
  for (const auto& clause : *cnf) {
    if (clause.size() > 2) throw FragmentError("implication graph requires a Krom matrix");
    std::vector<int> lits;
    bool satisfied = false;
    for (const auto& l : clause) {
      if (l.term.is_constant()) {
        satisfied = satisfied || l.term.value() == l.positive;
        continue;
      }
      lits.push_back(ImplicationGraph::vertex(atom_index(l.term), !l.positive));
    }
    if (satisfied) continue;
    if (lits.empty()) {
      g.empty_clause = true;
      continue;
    }
    int a = lits[0], b = lits.size() == 2 ? lits[1] : lits[0];
    g.adj[ImplicationGraph::negate(a)].push_back(b);
    if (lits.size() == 2) g.adj[ImplicationGraph::negate(b)].push_back(a);
  }
  return g;
}

/// The dependency relation v ~> w between vertices: w is an argument of v,
/// or w is quantified in an earlier block than v and each argument of w is an
/// argument of v, a universal from an earlier block, or an existential from a
/// block no later than v's.
inline bool depends(const ImplicationGraph& g, int v, int w) {
  const auto& a = g.atom(v);
  const auto& b = g.atom(w);
  if (b.args.empty() && std::binary_search(a.args.begin(), a.args.end(), b.head)) return true;
  int bv = g.block_of(v);
  int bw = g.block_of(w);
  if (bv < 0 || bw < 0 || !(bw < bv)) return false;
  for (int x : b.args) {
    if (std::binary_search(a.args.begin(), a.args.end(), x)) continue;
    int bx = g.block_of_var(x);
    if (bx < 0) return false;
    if (g.universal[x] ? !(bx < bv) : !(bx <= bv)) return false;
  }
  return true;
}

enum class Mark { Unmarked, True, False, Contingent };

inline const char* to_string(Mark m) {
  switch (m) {
    case Mark::True:
      return "true";
    case Mark::False:
      return "false";
    case Mark::Contingent:
      return "contingent";
    default:
      return "unmarked";
  }
}

/// Strongly connected components of an implication graph with their
/// condensation, universality and marking.
struct ComponentDAG {
  SccResult scc;
  Digraph dag;
  std::vector<std::vector<int>> members;
  std::vector<bool> universal;
  std::vector<Mark> marks;

  int count() const { return scc.count; }
  int of(int vertex) const { return scc.comp[static_cast<std::size_t>(vertex)]; }
  int negation(const ImplicationGraph&, int c) const { return of(ImplicationGraph::negate(members[c].front())); }
};

inline ComponentDAG components(const ImplicationGraph& g) {
  ComponentDAG d;
  d.scc = strongly_connected_components(g.adj);
  d.dag = condensation(g.adj, d.scc);
  d.members.resize(static_cast<std::size_t>(d.scc.count));
  d.universal.assign(static_cast<std::size_t>(d.scc.count), false);
  d.marks.assign(static_cast<std::size_t>(d.scc.count), Mark::Unmarked);
  for (int v = 0; v < g.vertex_count(); ++v) {
    d.members[d.of(v)].push_back(v);
    if (g.is_universal(v)) d.universal[d.of(v)] = true;
  }
  return d;
}

/// Outcome of the four component conditions with witnesses for failures.
struct ConditionReport {
  bool empty_clause = false;
  bool cond1 = true;  ///< no path between two distinct universal vertices
  bool cond2 = true;  ///< no vertex shares a component with its negation
  bool cond3 = true;  ///< existential vertices depend on the universal vertex of their component
  bool cond4 = true;  ///< the dependency relation between components is acyclic
  std::vector<int> path1;             ///< universal-to-universal path (vertices)
  int vertex2 = -1;                   ///< vertex in the component of its negation
  std::pair<int, int> pair3{-1, -1};  ///< (existential, universal) without dependency
  std::vector<int> cycle4;            ///< components forming a dependency cycle

  bool holds() const { return !empty_clause && cond1 && cond2 && cond3 && cond4; }
};

namespace detail {

inline std::vector<int> find_path(const Digraph& adj, int from, const std::vector<char>& target) {
  std::vector<int> parent(adj.size(), -2);
  std::queue<int> q;
  for (int w : adj[from])
    if (parent[w] == -2) {
      parent[w] = from;
      q.push(w);
    }
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (target[v] && v != from) {
      std::vector<int> path{v};
      while (path.back() != from) path.push_back(parent[path.back()]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int w : adj[v])
      if (parent[w] == -2) {
        parent[w] = v;
        q.push(w);
      }
  }
  return {};
}

// Component-level dependency edges: S -> S' when a universal vertex of S
// depends on a vertex of S'. Nodes from d.count() on are block hubs: hub b
// reaches every atom that each universal of block b depends on through the
// block order alone, and hub b points to hub b - 1. Reachability between
// components is the same as with the direct edges.
inline Digraph dependency_edges(const ImplicationGraph& g, const ComponentDAG& d) {
  const int n = d.count();
  const int blocks = static_cast<int>(g.blocks.size());
  Digraph dep(static_cast<std::size_t>(n + blocks));
  auto hub = [&](int b) { return n + b; };
  for (int b = 1; b < blocks; ++b) dep[hub(b)].push_back(hub(b - 1));
  std::vector<int> atom_of_var(g.vars.size(), -1);
  std::vector<std::vector<int>> by_arg(g.vars.size());
  for (int a = 0; a < static_cast<int>(g.atoms.size()); ++a) {
    const auto& atom = g.atoms[a];
    if (atom.args.empty()) atom_of_var[atom.head] = a;
    for (int x : atom.args) by_arg[x].push_back(a);
    int bc = g.block_of(2 * a);
    if (bc < 0) continue;
    int first = bc + 1;
    for (int x : atom.args) {
      int bx = g.block_of_var(x);
      if (bx < 0) {
        first = blocks;
        break;
      }
      first = std::max(first, g.universal[x] ? bx + 1 : bx);
    }
    if (first < blocks)
      for (int w : {2 * a, 2 * a + 1}) dep[hub(first)].push_back(d.of(w));
  }
  for (int a = 0; a < static_cast<int>(g.atoms.size()); ++a) {
    if (!g.is_universal(2 * a)) continue;
    std::vector<int> targets;
    for (int x : g.atoms[a].args) {
      if (atom_of_var[x] >= 0) targets.push_back(atom_of_var[x]);
      for (int c : by_arg[x])
        if (depends(g, 2 * a, 2 * c)) targets.push_back(c);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    int ba = g.block_of(2 * a);
    for (int u : {2 * a, 2 * a + 1}) {
      if (ba >= 0) dep[d.of(u)].push_back(hub(ba));
      for (int c : targets)
        for (int w : {2 * c, 2 * c + 1}) dep[d.of(u)].push_back(d.of(w));
    }
  }
  for (auto& out : dep) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return dep;
}

// Cycle among the components 0..n-1 of a dependency graph, with hub nodes
// dropped from the witness.
inline std::vector<int> find_cycle(const Digraph& dep, int n) {
  for (int s = 0; s < n; ++s)
    if (std::binary_search(dep[s].begin(), dep[s].end(), s)) return {s};
  SccResult scc = strongly_connected_components(dep);
  std::vector<int> size(static_cast<std::size_t>(scc.count), 0);
  for (int c : scc.comp) ++size[c];
  for (int s = 0; s < n; ++s) {
    if (size[scc.comp[s]] < 2) continue;
    Digraph inside(dep.size());
    for (int v = 0; v < static_cast<int>(dep.size()); ++v)
      for (int w : dep[v])
        if (scc.comp[v] == scc.comp[s] && scc.comp[w] == scc.comp[s]) inside[v].push_back(w);
    std::vector<int> parent(dep.size(), -2);
    std::queue<int> q;
    q.push(s);
    parent[s] = -1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : inside[v]) {
        if (w == s) {
          std::vector<int> cyc{v};
          while (parent[cyc.back()] >= 0) cyc.push_back(parent[cyc.back()]);
          std::reverse(cyc.begin(), cyc.end());
          std::erase_if(cyc, [n](int c) { return c >= n; });
          return cyc;
        }
        if (parent[w] == -2) {
          parent[w] = v;
          q.push(w);
        }
      }
    }
  }
  return {};
}

}  // namespace detail

/// Evaluates all four conditions on a graph (every condition is evaluated
/// even after a failure).
inline ConditionReport check_conditions(const ImplicationGraph& g, const ComponentDAG& d) {
  ConditionReport r;
  r.empty_clause = g.empty_clause;
  const int n = d.count();

  std::vector<int> universal_count(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.is_universal(v)) ++universal_count[d.of(v)];
  std::vector<char> reaches(static_cast<std::size_t>(n), 0);
  for (int c = 0; c < n; ++c)  // ascending ids visit successors first
    for (int w : d.dag[c])
      if (universal_count[w] > 0 || reaches[w]) reaches[c] = 1;
  std::vector<char> is_univ(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v = 0; v < g.vertex_count(); ++v) is_univ[v] = g.is_universal(v) ? 1 : 0;
  for (int v = 0; v < g.vertex_count() && r.cond1; ++v) {
    if (!is_univ[v]) continue;
    int c = d.of(v);
    if (universal_count[c] > 1 || reaches[c]) {
      r.cond1 = false;
      r.path1 = detail::find_path(g.adj, v, is_univ);
    }
  }

  for (int v = 0; v < g.vertex_count(); v += 2)
    if (d.of(v) == d.of(v + 1)) {
      r.cond2 = false;
      r.vertex2 = v;
      break;
    }

  for (int c = 0; c < n && r.cond3; ++c) {
    if (!d.universal[c]) continue;
    for (int u : d.members[c]) {
      if (!g.is_universal(u)) continue;
      for (int v : d.members[c])
        if (!g.is_universal(v) && !depends(g, v, u)) {
          r.cond3 = false;
          r.pair3 = {v, u};
          break;
        }
      if (!r.cond3) break;
    }
  }

  Digraph dep = detail::dependency_edges(g, d);
  r.cycle4 = detail::find_cycle(dep, n);
  r.cond4 = r.cycle4.empty();
  return r;
}

namespace detail {

inline void require_braided_fragment(const Formula& f) {
  FragmentProfile p = classify(f);
  if (!p.is_prenex || !p.is_cnf || !p.is_krom) throw FragmentError("krom-graph engine requires a prenex Krom CNF formula");
  if (!p.is_simple) throw FragmentError("krom-graph engine requires a simple formula");
  if (!p.is_unique) throw FragmentError("krom-graph engine requires uniqueness");
  if (!p.is_closed) throw FragmentError("krom-graph engine requires a closed formula");
  if (!p.is_braided) throw FragmentError("krom-graph engine requires a braided formula");
}

}  // namespace detail

inline ConditionReport check_conditions(const Formula& f) {
  detail::require_braided_fragment(f);
  ImplicationGraph g = build_graph(f);
  ComponentDAG d = components(g);
  return check_conditions(g, d);
}

/// Truth of a braided simple unique Krom formula: true iff all four conditions hold.
inline bool decide(const Formula& f) { return check_conditions(f).holds(); }

namespace detail {

// Components in reverse topological order of the condensation (sinks first),
// ties broken by the smallest member vertex.
inline std::vector<int> reverse_topological(const ComponentDAG& d) {
  const int n = d.count();
  std::vector<int> pending(static_cast<std::size_t>(n), 0);
  Digraph rev(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c)
    for (int w : d.dag[c]) {
      ++pending[c];
      rev[w].push_back(c);
    }
  using Item = std::pair<int, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> ready;
  for (int c = 0; c < n; ++c)
    if (pending[c] == 0) ready.emplace(d.members[c].front(), c);
  std::vector<int> order;
  while (!ready.empty()) {
    int c = ready.top().second;
    ready.pop();
    order.push_back(c);
    for (int p : rev[c])
      if (--pending[p] == 0) ready.emplace(d.members[p].front(), p);
  }
  return order;
}

}  // namespace detail

/// Marks components: universal ones contingent, existential ones true or false
/// so that no path leads from true to contingent/false or from contingent to false.
inline ComponentDAG marking_witness(const ImplicationGraph& g) {
  ComponentDAG d = components(g);
  if (!check_conditions(g, d).holds()) throw FragmentError("marking_witness called on a false formula");
  for (int c = 0; c < d.count(); ++c)
    if (d.universal[c]) d.marks[c] = Mark::Contingent;
  std::vector<signed char> bad(static_cast<std::size_t>(d.count()), -1);
  auto reaches_bad = [&](int c) {
    std::vector<std::pair<int, std::size_t>> stack{{c, 0}};
    while (!stack.empty()) {
      auto& [x, i] = stack.back();
      if (bad[x] >= 0) {
        stack.pop_back();
        continue;
      }
      if (i < d.dag[x].size()) {
        int w = d.dag[x][i++];
        if (bad[w] < 0) stack.emplace_back(w, 0);
        continue;
      }
      bool b = false;
      for (int w : d.dag[x]) b = b || d.marks[w] == Mark::Contingent || d.marks[w] == Mark::False || bad[w] == 1;
      bad[x] = b ? 1 : 0;
      stack.pop_back();
    }
    return bad[c] == 1;
  };
  for (int c : detail::reverse_topological(d)) {
    if (d.marks[c] != Mark::Unmarked) continue;
    Mark m = reaches_bad(c) ? Mark::False : Mark::True;
    d.marks[c] = m;
    d.marks[d.negation(g, c)] = m == Mark::True ? Mark::False : Mark::True;
  }
  return d;
}

inline ComponentDAG marking_witness(const Formula& f) {
  detail::require_braided_fragment(f);
  return marking_witness(build_graph(f));
}

/// Resolves contingent components for a fixed interpretation of the universal
/// variables, following the dependency order between components.
inline void refine_marking(const ImplicationGraph& g, ComponentDAG& d, const Interpretation& universal) {
  Digraph dep = detail::dependency_edges(g, d);
  SccResult order = strongly_connected_components(dep);
  std::vector<int> comps(static_cast<std::size_t>(d.count()));
  for (int c = 0; c < d.count(); ++c) comps[c] = c;
  std::stable_sort(comps.begin(), comps.end(), [&](int a, int b) { return order.comp[a] < order.comp[b]; });
  auto value_of_var = [&](int x) -> bool {
    const Var& v = g.vars[x];
    if (g.universal[x]) return universal.at(v)[0];
    for (int a = 0; a < static_cast<int>(g.atoms.size()); ++a)
      if (g.atoms[a].head == x && g.atoms[a].args.empty()) {
        Mark m = d.marks[d.of(2 * a)];
        if (m == Mark::Contingent) throw std::logic_error("argument resolved after its dependent");
        return m == Mark::True;
      }
    return false;
  };
  for (int c : comps) {
    if (!d.universal[c] || d.marks[c] != Mark::Contingent) continue;
    int u = -1;
    for (int v : d.members[c])
      if (g.is_universal(v)) u = v;
    const auto& atom = g.atom(u);
    std::vector<bool> tuple;
    for (const auto& arg : atom.term.args()) {
      auto it = std::find(g.vars.begin(), g.vars.end(), arg.head());
      tuple.push_back(value_of_var(static_cast<int>(it - g.vars.begin())));
    }
    bool value = universal.at(g.vars[atom.head]).at(tuple);
    if (g.is_negative(u)) value = !value;
    d.marks[c] = value ? Mark::True : Mark::False;
    d.marks[d.negation(g, c)] = value ? Mark::False : Mark::True;
  }
}

namespace detail {

// Arguments of quantified functions that break braidedness and may be
// elided: constants, and variables quantified in an earlier block.
inline std::optional<std::pair<Var, Term>> elision_candidate(const Formula& f) {
  auto bind = bindings(block_structure(f));
  std::optional<std::pair<Var, Term>> found;
  for_each_term(split_prefix(f).matrix, [&](const Term& t) {
    if (found || !t.is_variable() || t.args().empty()) return;
    auto hb = bind.find(t.head());
    if (hb == bind.end()) return;
    for (const auto& a : t.args()) {
      if (a.is_constant()) {
        found = std::make_pair(t.head(), a);
        return;
      }
      if (!a.is_proposition()) continue;
      auto ab = bind.find(a.head());
      if (ab != bind.end() && ab->second.block < hb->second.block) {
        found = std::make_pair(t.head(), a);
        return;
      }
    }
  });
  return found;
}

}  // namespace detail

/// Brings a unique Krom formula from the existential level one (simple), the
/// universal level one, or the universal level two (simple) into braided form
/// by simplification and elision, then decides it.
inline Formula braid_nl_fragment(const Formula& f) {
  FragmentProfile p = classify(f);
  if (!p.is_prenex || !p.is_krom || !p.is_unique || !p.is_closed)
    throw FragmentError("input is not a closed unique Krom formula in prenex form");
  bool sigma1 = p.prefix == PrefixKind::Sigma && p.level == 1 && p.is_simple;
  bool pi1 = p.prefix == PrefixKind::Pi && p.level == 1;
  bool pi2 = p.prefix == PrefixKind::Pi && p.level == 2 && p.is_simple;
  if (!sigma1 && !pi1 && !pi2) throw FragmentError("input is outside the fragments handled by the krom-graph pipeline");
  Formula g = p.is_simple ? f : make_simple(f);
  while (auto cand = detail::elision_candidate(g)) g = elide(g, cand->first, cand->second);
  if (!classify(g).is_braided) throw FragmentError("formula is not braided after elision");
  return g;
}

inline bool decide_nl_fragment(const Formula& f) { return decide(braid_nl_fragment(f)); }

}  // namespace so2kit

#endif
