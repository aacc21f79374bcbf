#pragma once

#include <string>
#include <vector>

#include "hyp/graph.hpp"
#include "hyp/nubg.hpp"
#include "hyp/separator.hpp"
#include "hyp/tiling.hpp"

namespace hyp {

struct TreeDecomposition {
  std::vector<std::vector<int>> bags;  // sorted vertex ids
  Graph tree;                          // over bag ids

  int width() const {
    int w = -1;
    for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
    return w;
  }
};

struct TdReport {
  bool valid = false;
  int width = -1;
  std::string violation;  // empty when valid
};

// Checks vertex coverage, edge coverage, and the connected-subtree property.
TdReport validate_td(const Graph& g, const TreeDecomposition& td);

// Decomposition of the tiling-partition quotient, bags holding class ids.
struct WeightedTreeDecomposition {
  std::vector<std::vector<int>> bags;  // sorted class ids
  Graph tree;
  std::vector<double> bag_weights;  // sum of log2(|C|+1) per bag
  double weighted_width = 0.0;      // max bag weight
  int depth = 0;                    // separator recursion depth
  Partition partition;              // classes the ids refer to
};

// Balanced-separator recursion on the quotient of a tiling partition: each
// node's bag is the separator classes plus the inherited boundary classes
// adjacent to the node's component; recursion stops at min_size classes.
WeightedTreeDecomposition decompose_by_separators(const NubgInstance& inst,
                                                  const SquareTilingSpec& spec,
                                                  int min_size = 8, uint64_t seed = 0,
                                                  int trials = 64, double eps_bal = 0.05);

// Iteratively peel the tiles adjacent to the unbounded complement component;
// the number of rounds is the outerplanarity of the tile adjacency graph.
// `tiles` index into the patch, which supplies adjacency and the outer
// frontier (its last BFS ring).
struct PeelResult {
  std::vector<std::vector<int>> layers;
  int outerplanarity = 0;
};
PeelResult layer_peel(const RegularPatch& patch, const std::vector<int>& tiles);

Graph graph_power(const Graph& g, int k);
Graph blowup_graph(const Graph& g, int k);  // copies of v: v*k .. v*k+k-1

// Bags replaced by their distance-ceil(k/2) neighborhoods: a decomposition
// of G^k.
TreeDecomposition power_decomposition(const TreeDecomposition& td, const Graph& g, int k);

// Bags replaced by all k clique copies of their vertices: a decomposition of
// the k-fold blowup.
TreeDecomposition blowup_decomposition(const TreeDecomposition& td, int k);

// Elimination-order heuristic (min-fill on small graphs, min-degree on
// large); always valid, width is an upper bound on the treewidth.
TreeDecomposition heuristic_decompose(const Graph& g);

// Exact treewidth by dynamic programming over elimination prefixes; feasible
// to n ~ 20.
int exact_treewidth(const Graph& g);

// Shallow-instance pipeline in the plane: occupied tiles of a regular-tiling
// patch, expanded by l = ceil(2*rho*nu/c)+1 rings, decomposed, raised to the
// l-th power, blown up by the max per-tile occupancy, and restricted to the
// actual vertices. max_occupancy > 0 rejects instances with fuller tiles.
TreeDecomposition shallow_decompose(const NubgInstance& inst, const RegularTilingSpec& spec,
                                    int max_occupancy = 0);

// Class bags to vertex bags.
TreeDecomposition expand_weighted(const WeightedTreeDecomposition& wtd,
                                  const Partition& part);

}  // namespace hyp
