#pragma once

#include <stdexcept>
#include <vector>

#include "hyp/geom.hpp"
#include "hyp/nubg.hpp"
#include "hyp/tiling.hpp"

namespace hyp {

// Centerpoint of a point set. exact2d clips the region of points with the
// required line depth from halfplanes at all critical directions (Klein
// model, where hyperbolic lines are Euclidean chords): every hyperbolic line
// through the result leaves at most ceil(2n/3) points strictly on each side.
// radon is the iterated-Radon approximation with halfspace bound
// (d/(d+1) + eps_bal) * n, checked against 1000 random hyperplanes.
enum class CenterpointMode { exact2d, radon };
HPoint centerpoint(const std::vector<HPoint>& points, CenterpointMode mode,
                   double eps_bal = 0.05, uint64_t seed = 0);

// Separator made of tile cliques: the classes of a diameter-(rho-eps) tiling
// partition whose tiles meet the slab N(H, rho*nu) around an accepted
// hyperplane H through a centerpoint.
struct CliqueSeparator {
  std::vector<int> classes;   // accepted class ids into `partition`
  std::vector<int> vertices;  // union of those classes
  int size = 0;               // number of classes
  double weight = 0.0;        // sum of log2(|C|+1)
  double balance = 0.0;       // largest component fraction after removal
  Hyperplane hyperplane;
  int trials_used = 0;
  HPoint center;
  Partition partition;  // the tiling partition the class ids refer to
};

struct SeparatorError : std::runtime_error {
  explicit SeparatorError(const std::string& what, CliqueSeparator best_)
      : std::runtime_error(what), best(std::move(best_)) {}
  CliqueSeparator best;  // best-effort candidate (minimum balance seen)
};

// Las Vegas search: up to `trials` random hyperplanes through the
// centerpoint; returns the minimum-weight candidate whose components all
// stay within (d/(d+1) + eps_bal) * n vertices. Throws SeparatorError with
// the best-effort candidate if no trial balances.
CliqueSeparator find_separator(const NubgInstance& inst, const SquareTilingSpec& spec,
                               int trials = 64, uint64_t seed = 0,
                               double eps_bal = 0.05);

struct SeparatorReport {
  std::vector<int> component_sizes;
  int size = 0;
  double weight = 0.0;
  double balance = 0.0;
  bool balanced = false;
};

SeparatorReport validate_separator(const NubgInstance& inst, const CliqueSeparator& sep,
                                   double eps_bal = 0.05);

}  // namespace hyp
