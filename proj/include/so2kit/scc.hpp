#ifndef SO2KIT_SCC_HPP
#define SO2KIT_SCC_HPP

#include <algorithm>
#include <utility>
#include <vector>

namespace so2kit {

/// Directed graph in adjacency-list form.
using Digraph = std::vector<std::vector<int>>;

/// Strongly connected components. Component ids follow Tarjan completion
/// order, so an edge between different components always goes from a higher
/// id to a lower id (id 0 is a sink).
struct SccResult {
  std::vector<int> comp;
  int count = 0;
};

/// Iterative Tarjan, linear time, no recursion.
inline SccResult strongly_connected_components(const Digraph& g) {
  const int n = static_cast<int>(g.size());
  SccResult r;
  r.comp.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;
  int counter = 0;
  for (int s = 0; s < n; ++s) {
    if (index[s] >= 0) continue;
    call.emplace_back(s, 0);
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge == 0 && index[v] < 0) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      if (edge < g[v].size()) {
        int w = g[v][edge++];
        if (index[w] < 0) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          r.comp[w] = r.count;
        } while (w != v);
        ++r.count;
      }
      int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return r;
}

/// Condensation: one vertex per component, duplicate edges and self-loops removed.
inline Digraph condensation(const Digraph& g, const SccResult& scc) {
  Digraph dag(static_cast<std::size_t>(scc.count));
  for (std::size_t v = 0; v < g.size(); ++v)
    for (int w : g[v])
      if (scc.comp[v] != scc.comp[w]) dag[scc.comp[v]].push_back(scc.comp[w]);
  for (auto& out : dag) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return dag;
}

}  // namespace so2kit

#endif
