#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyp/geom.hpp"
#include "hyp/graph.hpp"
#include "hyp/tiling.hpp"

namespace hyp {

// Noisy unit-ball graph over embedded points: pairs closer than 2*rho must be
// adjacent, pairs farther than 2*rho*nu must not be; in between is free.
struct NubgInstance {
  std::vector<HPoint> points;
  double rho = 0.0;
  double nu = 1.0;
  Graph g;
};

// How the free ("gray") zone between 2*rho and 2*rho*nu is filled.
struct NoisePolicy {
  enum Kind { none, all, bernoulli } kind = none;
  double p = 0.5;
  uint64_t seed = 0;
  static NoisePolicy none_policy() { return {}; }
  static NoisePolicy all_policy() { return {all, 0.0, 0}; }
  static NoisePolicy bernoulli_policy(double p, uint64_t seed) { return {bernoulli, p, seed}; }
};

NubgInstance build_graph(const std::vector<HPoint>& points, double rho, double nu,
                         const NoisePolicy& policy = {});

// Max number of points in any radius-rho ball: a certified lower bound (best
// candidate center) and an upper bound (max points in a 2*rho ball around a
// data point). In the plane the candidate set includes all centers with two
// points on the ball boundary, which makes the lower bound exact up to
// degeneracies.
struct Shallowness {
  int lower = 0;
  int upper = 0;
};
Shallowness shallowness(const std::vector<HPoint>& points, double rho);

struct Partition {
  enum Kind { clique, greedy, kappa } kind = clique;
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of;  // per vertex
  std::vector<int> centers;   // greedy kind: the independent-set vertex per class
  int kappa_bound = 1;        // cliques needed to cover any class (1 for clique kind)
};

// One class per nonempty tile of a tiling with tile diameter < rho; every
// class is then a clique. Default tiling: square tiling with
// delta = rho * (1 - 1/100).
Partition tiling_partition(const NubgInstance& inst, const SquareTilingSpec& spec);
Partition tiling_partition(const NubgInstance& inst);

// Classes are stars around a greedily-built maximal independent set, in a
// seed-determined random vertex order.
Partition greedy_partition(const Graph& g, uint64_t seed);

// Contraction of the partition classes, node weight log2(|C|+1).
struct QuotientGraph {
  Graph g;
  std::vector<double> weight;
  std::vector<std::vector<int>> classes;
  double gamma(const std::vector<int>& nodes) const;
};
QuotientGraph contract(const Graph& g, const Partition& part);

// Greedy clique cover of one class. With the embedded instance available the
// cover starts from the clique partition induced by a (rho - eps)-diameter
// tiling, so its size is bounded by the number of tiles the class meets.
std::vector<std::vector<int>> kappa_cover(const Graph& g, const std::vector<int>& cls,
                                          const NubgInstance* inst = nullptr);

}  // namespace hyp
