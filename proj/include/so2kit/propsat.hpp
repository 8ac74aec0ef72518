#ifndef SO2KIT_PROPSAT_HPP
#define SO2KIT_PROPSAT_HPP

// Propositional subsolvers: linear-time Horn satisfiability with least model
// and implication-graph 2-SAT.

#include <cstdlib>
#include <string>
#include <vector>

#include "so2kit/errors.hpp"
#include "so2kit/scc.hpp"

namespace so2kit {

/// CNF over variables 1..num_vars; literal +v / -v as in DIMACS.
struct PropCnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

struct SatResult {
  bool sat = false;
  std::vector<bool> model;  ///< model[v-1] for variable v; empty when unsat
};

inline bool is_horn(const PropCnf& cnf) {
  for (const auto& c : cnf.clauses) {
    int pos = 0;
    for (int l : c) pos += l > 0 ? 1 : 0;
    if (pos > 1) return false;
  }
  return true;
}

inline bool is_krom(const PropCnf& cnf) {
  for (const auto& c : cnf.clauses)
    if (c.size() > 2) return false;
  return true;
}

/// Forward chaining from the all-false assignment; the model returned is the least model.
inline SatResult horn_sat(const PropCnf& cnf) {
  const int n = cnf.num_vars;
  const std::size_t m = cnf.clauses.size();
  std::vector<int> pending(m, 0), head(m, 0);
  std::vector<std::vector<int>> watch(static_cast<std::size_t>(n) + 1);
  std::vector<int> queue;
  std::vector<bool> value(static_cast<std::size_t>(n) + 1, false);
  SatResult res;
  auto fire = [&](std::size_t c) {
    if (head[c] == 0) return false;
    int v = head[c];
    if (!value[v]) {
      value[v] = true;
      queue.push_back(v);
    }
    return true;
  };
  for (std::size_t c = 0; c < m; ++c) {
    for (int l : cnf.clauses[c]) {
      if (l == 0 || std::abs(l) > n) throw Error("literal out of range in propositional CNF");
      if (l > 0) {
        if (head[c] != 0) throw FragmentError("horn_sat: clause " + std::to_string(c) + " has two positive literals");
        head[c] = l;
      } else {
        ++pending[c];
        watch[-l].push_back(static_cast<int>(c));
      }
    }
  }
  for (std::size_t c = 0; c < m; ++c)
    if (pending[c] == 0 && !fire(c)) return res;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    for (int c : watch[queue[qi]])
      if (--pending[c] == 0 && !fire(static_cast<std::size_t>(c))) return res;
  }
  res.sat = true;
  res.model.assign(value.begin() + 1, value.end());
  return res;
}

/// Satisfiability of a CNF with at most two literals per clause.
inline SatResult two_sat(const PropCnf& cnf) {
  const int n = cnf.num_vars;
  auto node = [](int lit) { return lit > 0 ? 2 * (lit - 1) : 2 * (-lit - 1) + 1; };
  Digraph g(2 * static_cast<std::size_t>(n));
  SatResult res;
  for (const auto& c : cnf.clauses) {
    if (c.size() > 2) throw FragmentError("two_sat: clause with more than two literals");
    for (int l : c)
      if (l == 0 || std::abs(l) > n) throw Error("literal out of range in propositional CNF");
    if (c.empty()) return res;
    int a = c[0], b = c.size() == 2 ? c[1] : c[0];
    g[node(-a)].push_back(node(b));
    g[node(-b)].push_back(node(a));
  }
  SccResult scc = strongly_connected_components(g);
  res.model.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    int pos = scc.comp[2 * v], neg = scc.comp[2 * v + 1];
    if (pos == neg) {
      res.model.clear();
      return res;
    }
    res.model[v] = pos < neg;
  }
  res.sat = true;
  return res;
}

}  // namespace so2kit

#endif
