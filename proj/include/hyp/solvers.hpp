#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyp/decomp.hpp"
#include "hyp/graph.hpp"
#include "hyp/nubg.hpp"

namespace hyp {

// Resource limits for the decomposition DPs. kappa > 0 caps the number of
// selected vertices per partition class (sound when every class is covered by
// kappa cliques); kappa == 0 disables the cap.
struct DPBudget {
  long long max_states = 50'000'000;
  int kappa = 0;
};

struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Result of an optimization DP. node_bags/node_states expose the per-node
// table sizes of the underlying nice decomposition for accounting tests.
struct SolveResult {
  int size = 0;
  std::vector<int> witness;
  long long max_bag_states = 0;
  std::vector<std::vector<int>> node_bags;
  std::vector<long long> node_states;
};

// Maximum independent set via DP over the expanded weighted decomposition.
SolveResult solve_is(const Graph& g, const WeightedTreeDecomposition& wtd,
                     const Partition& part, const DPBudget& budget = {});

// Minimum vertex cover, by complementing a maximum independent set.
SolveResult solve_vc(const Graph& g, const WeightedTreeDecomposition& wtd,
                     const Partition& part, const DPBudget& budget = {});

// Minimum dominating set: three states per bag vertex (selected, dominated,
// not yet dominated), selection cap kappa per class.
SolveResult solve_ds(const Graph& g, const WeightedTreeDecomposition& wtd,
                     const Partition& part, const DPBudget& budget = {});

// Proper q-coloring or nullopt. Rejects early when some class needs more than
// kappa_cover(class) * q colors; otherwise runs a q^width DP over a
// heuristic decomposition of g.
std::optional<std::vector<int>> solve_qcoloring(const Graph& g, int q, const Partition& part,
                                                const DPBudget& budget = {});

// Hamiltonicity-preserving pruning. Keeps, for each pair of adjacent cliques,
// a maximum-matching-preserving subset of at most 2*Delta^2+2 cross edges
// (Delta = max quotient degree), then drops clique vertices left without any
// cross edge; g is the induced subgraph of the input on the kept vertices.
// feasible == false means the input is already known non-Hamiltonian.
struct PrunedGraph {
  std::vector<int> vertices;  // kept original vertex ids, sorted
  Graph g;                    // induced subgraph on vertices
  bool feasible = true;
};
PrunedGraph prune_hamiltonian(const Graph& g, const Partition& clique_part);

// Hamiltonian cycle of g or nullopt: prune, decompose the reduced graph, then
// a path-endpoint-matching DP over the decomposition. The returned order is a
// verified Hamiltonian cycle of the original graph.
std::optional<std::vector<int>> solve_hamiltonian(const Graph& g, const Partition& clique_part,
                                                  const DPBudget& budget = {});

// Exhaustive ground truth. is/vc/ds return the optimal size (n <= 20);
// qcol returns 1/0 for q-colorability (n <= 20); hc returns 1/0 via a
// bitmask DP (n <= 16). Oversized inputs throw.
enum class Problem { is, vc, ds, qcol, hc };
int brute_force(Problem p, const Graph& g, int q = 0);

// Witness predicates, independent of any DP.
bool is_independent_set(const Graph& g, const std::vector<int>& vs);
bool is_vertex_cover(const Graph& g, const std::vector<int>& vs);
bool is_dominating_set(const Graph& g, const std::vector<int>& vs);
bool is_proper_coloring(const Graph& g, const std::vector<int>& colors, int q);
bool is_hamiltonian_cycle(const Graph& g, const std::vector<int>& order);

}  // namespace hyp
