#include "hyp/graph.hpp"

#include <deque>
#include <unordered_map>

namespace hyp {

std::vector<int> components(const Graph& g) {
  std::vector<int> comp(g.n, -1);
  int next = 0;
  for (int s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : g.adj[u])
        if (comp[v] < 0) {
          comp[v] = next;
          queue.push_back(v);
        }
    }
    ++next;
  }
  return comp;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& vs) {
  std::unordered_map<int, int> index;
  for (size_t i = 0; i < vs.size(); ++i) index[vs[i]] = static_cast<int>(i);
  Graph h(static_cast<int>(vs.size()));
  for (size_t i = 0; i < vs.size(); ++i)
    for (int w : g.adj[vs[i]]) {
      auto it = index.find(w);
      if (it != index.end() && it->second > static_cast<int>(i))
        h.add_edge(static_cast<int>(i), it->second);
    }
  return h;
}

bool is_clique(const Graph& g, const std::vector<int>& vs) {
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j)
      if (!g.has_edge(vs[i], vs[j])) return false;
  return true;
}

bool is_connected_subset(const Graph& g, const std::vector<int>& vs) {
  if (vs.empty()) return true;
  Graph h = induced_subgraph(g, vs);
  std::vector<int> comp = components(h);
  for (int c : comp)
    if (c != 0) return false;
  return true;
}

}  // namespace hyp
