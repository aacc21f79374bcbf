#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyp/decomp.hpp"
#include "hyp/geom.hpp"
#include "hyp/nubg.hpp"

namespace hyp {

// Point-cloud generators behind `hyptw gen-points`.
struct GenPointsSpec {
  enum Kind { uniform_ball, per_tile, horosphere_grid } kind = uniform_ball;
  int n = 0;           // uniform_ball: sample count; per_tile: budget that sets defaults
  int d = 2;
  uint64_t seed = 0;
  double R = 0.0;      // ball radius; per_tile default ln(sqrt(n))
  int count = 0;       // per_tile points per tile; default round(sqrt(n))
  double delta = 1.0;  // per_tile tile diameter
  int side = 0;        // horosphere_grid lattice side per axis
};
std::vector<HPoint> gen_points(const GenPointsSpec& spec);

struct ExperimentConfig {
  std::string exp;              // "separator-scaling" | "solver-equivalence"
  std::vector<int> n_schedule;  // strictly increasing
  int d = 2;
  double rho = 0.5;
  double nu = 1.0;
  std::vector<uint64_t> seeds;  // explicit, for reproducibility
  int trials = 1;
  double stage_ceiling_s = 120.0;
  bool report_seconds = false;  // wall-clock rows break byte-identical output
};
ExperimentConfig parse_experiment_config(const std::string& text);

// Writes `exp,n,d,seed,trial,stage,metric,value,status` rows; stage errors
// and ceiling overruns are recorded per-row and the run continues.
void run_experiment(const ExperimentConfig& cfg, std::ostream& csv);

// Shared solve pipeline: separator-recursion decomposition of the tiling
// quotient, falling back to a heuristic quotient decomposition when no
// balanced separator exists.
WeightedTreeDecomposition pipeline_decompose(const NubgInstance& inst, uint64_t seed);

// Full command-line front end; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyp
