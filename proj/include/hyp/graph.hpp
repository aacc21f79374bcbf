#pragma once

#include <algorithm>
#include <utility>
#include <vector>

namespace hyp {

// Simple undirected graph over vertices 0..n-1 with sorted adjacency lists.
struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adj;

  Graph() = default;
  explicit Graph(int n_) : n(n_), adj(n_) {}

  void add_edge(int u, int v) {
    if (u == v) return;
    auto ins = [&](int a, int b) {
      auto it = std::lower_bound(adj[a].begin(), adj[a].end(), b);
      if (it == adj[a].end() || *it != b) adj[a].insert(it, b);
    };
    ins(u, v);
    ins(v, u);
  }

  bool has_edge(int u, int v) const {
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
  }

  int degree(int v) const { return static_cast<int>(adj[v].size()); }

  long long edge_count() const {
    long long s = 0;
    for (const auto& a : adj) s += static_cast<long long>(a.size());
    return s / 2;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n; ++u)
      for (int v : adj[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }
};

// Component id per vertex, ids dense from 0.
std::vector<int> components(const Graph& g);

// Subgraph induced by vs; vertex i of the result is vs[i].
Graph induced_subgraph(const Graph& g, const std::vector<int>& vs);

bool is_clique(const Graph& g, const std::vector<int>& vs);
bool is_connected_subset(const Graph& g, const std::vector<int>& vs);

}  // namespace hyp
