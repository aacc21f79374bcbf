#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyp/graph.hpp"
#include "hyp/nubg.hpp"
#include "hyp/tiling.hpp"

// Reduction chain: (3,3)-CNF satisfiability -> grid tiling -> independent set
// on a noisy uniform ball graph realized on the right-angled pentagon tiling.

namespace hyp {

// CNF over variables 1..num_vars; literals are signed 1-based ids.
struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

CnfFormula read_dimacs(std::istream& in);
void write_dimacs(std::ostream& out, const CnfFormula& f);

// Simplifies to the normal form where every clause has 2 or 3 literals and
// every variable occurs at most twice: unit clauses are propagated and
// variables with a single occurrence are set to satisfy their clause, to a
// fixed point. Variables are renumbered densely. A contradiction surfaces as
// a single empty clause. Clauses wider than 3 literals are rejected;
// occurrence counts are unconstrained (the downstream grouping never needs
// them).
CnfFormula normalize_cnf(const CnfFormula& f);

// k x k grid of candidate sets over [N] x [N]. A solution picks one pair per
// cell; cells (a,b) and (a+1,b) constrain first coordinates (equal in eq
// mode, non-decreasing in leq mode), cells (a,b) and (a,b+1) constrain
// second coordinates the same way.
struct GridTilingInstance {
  int k = 1;
  int N = 1;
  enum Mode { eq, leq };
  Mode mode = eq;
  // sets[a][b], 0-based cell indices; elements are 1-based (x,y) pairs.
  std::vector<std::vector<std::vector<std::pair<int, int>>>> sets;
};

std::string write_gt_json(const GridTilingInstance& inst);
GridTilingInstance read_gt_json(const std::string& text);

// Clause-group reduction: clauses are split into k ~ sqrt(m) groups, cell
// (a,b) holds pairs of assignment indices (x for the variables of group b, y
// for group a) that agree on shared variables and satisfy both groups.
// The eq-mode instance is solvable iff the formula is satisfiable.
GridTilingInstance sat_to_gridtiling(const CnfFormula& f);

// Exhaustive search with early constraint checks; desk-scale caps k <= 4,
// N <= 8. Returns the chosen pair per cell, or nullopt.
std::optional<std::vector<std::vector<std::pair<int, int>>>> gt_brute(
    const GridTilingInstance& inst);

// A k x k grid drawn on the vertex graph Gamma of the (5,4) pentagon tiling:
// grid images f(a,b) at distinct tiles plus canonical connecting paths whose
// interiors are pairwise vertex-disjoint. Row arcs run radially (a
// direction), column arcs along circular corridors (b direction). The
// adjacency structure downstream only needs image distinctness and corridor
// disjointness, so the patch uses compact radii; the reference radii r0 and
// beta derived from n_param are reported and checked against their closed
// forms in tests.
struct GridEmbedding {
  RegularPatch patch;               // (5,4) pentagon patch
  std::vector<HPoint> vertex_pos;   // Gamma vertex positions
  Graph gamma;                      // pentagon-side adjacency
  int k = 0;
  int n_param = 0;
  double rho = 0.0;    // half pentagon side: acosh(cos(pi/5)/sin(pi/4))
  double delta = 0.0;  // pentagon diameter
  double r0 = 0.0;     // asinh(sinh(4*delta) * n_param)
  double beta = 0.0;   // 2*pi / n_param
  std::vector<std::vector<int>> grid;  // [a][b] -> Gamma vertex id
  struct Arc {
    int a = 0, b = 0;   // source cell
    bool adir = false;  // true: (a,b)->(a+1,b); false: (a,b)->(a,b+1)
    std::vector<int> seq;  // Gamma vertex ids, endpoints included
  };
  std::vector<Arc> arcs;
};

GridEmbedding build_grid_embedding(int n_param, int k);

// Independent-set instance from a leq-mode grid tiling drawn on emb: each
// grid vertex carries one point per candidate pair (cliques via distance 0),
// path interiors carry index ladders, and arc edges connect strictly
// decreasing indices so an independent set of size target picks a
// non-decreasing index chain, i.e. a tiling solution.
struct IsReduction {
  NubgInstance inst;
  int target = 0;
  std::vector<int> site;                   // per point: Gamma vertex id
  std::vector<std::pair<int, int>> label;  // per point: (x,y) indices
};

IsReduction gtleq_to_is(const GridTilingInstance& inst, const GridEmbedding& emb);

}  // namespace hyp
