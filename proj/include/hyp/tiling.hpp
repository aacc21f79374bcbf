#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hyp/geom.hpp"

namespace hyp {

// ----- half-space "square" tiling of H^d -----
//
// Base tile S_delta in the half-space model: the box [0,s]^{d-1} x [1, s+1],
// with hyperbolic diameter delta. Tiles are images f_{a,b}(S_delta) with
// f_{a,b}(p) = (s+1)^b (p + (s*a, 0)).

struct SquareTilingSpec {
  int d = 0;
  double delta = 0.0;     // hyperbolic tile diameter
  double s = 0.0;         // Euclidean side of the base cube
  double inradius = 0.0;  // 0.5 * ln(s+1)
  double circumradius = 0.0;  // max distance from tile center to a corner
  // Height (last half-space coordinate) of the base-tile center, chosen on
  // the vertical axis through the lateral midpoint to minimize the covering
  // radius; the Euclidean box midpoint is far off-center hyperbolically.
  double center_height = 0.0;
};

SquareTilingSpec square_tiling(int d, double delta);

struct TileId {
  std::vector<long long> a;  // lateral index, size d-1
  long long b = 0;           // scale level
  auto operator<=>(const TileId&) const = default;
  std::string str() const;
};

// Point location with half-open boxes; each tile owns its lexicographically
// minimal faces.
TileId locate(const SquareTilingSpec& spec, const HPoint& p);

Isometry tile_isometry(const SquareTilingSpec& spec, const std::vector<long long>& a,
                       long long b);

// Closed half-space box of a tile: lateral ranges lo[i]..hi[i] (i < d-1) and
// level range lo[d-1]..hi[d-1].
struct TileBox {
  Vec lo, hi;  // size d
};
TileBox tile_box(const SquareTilingSpec& spec, const TileId& t);
HPoint tile_center(const SquareTilingSpec& spec, const TileId& t);
std::vector<HPoint> tile_corners(const SquareTilingSpec& spec, const TileId& t);

// Tiles whose boundary meets t's boundary in more than one point: the
// 3^{d-1}-1 lateral translates at the same level plus the tiles one level
// up/down whose Euclidean shadows overlap in more than a corner.
std::vector<TileId> neighbors(const SquareTilingSpec& spec, const TileId& t);

// ----- regular tilings of H^2 -----

struct RegularTilingSpec {
  int delta = 0;       // parameter for the (2^{delta+2}, 3) family; 0 if overridden
  long long gon = 0;   // m
  int meet = 0;        // q
  double ov = 0.0;     // center-to-vertex (circumradius)
  double vp = 0.0;     // vertex-to-edge-midpoint (half side)
  double po = 0.0;     // edge-midpoint-to-center (inradius)
  double side_len = 0.0;   // 2*vp
  double area = 0.0;       // tile area
  double perimeter = 0.0;  // 2*m*vp
  double sep_const = 0.0;  // 2*vp*(1-1e-6): non-neighboring tiles are farther apart
  double diameter() const;  // max vertex-to-vertex distance
};

// q in {3,4}; gon_override (e.g. 5 for the pentagon (5,4) tiling) replaces
// 2^{delta+2}.
RegularTilingSpec regular_tiling(int delta, int q = 3, long long gon_override = 0);

// Finite patch generated by BFS over edge-reflections from a central tile.
struct RegularPatch {
  RegularTilingSpec spec;
  std::vector<HPoint> center;   // per tile
  std::vector<HPoint> vertex0;  // one vertex per tile (orientation anchor)
  std::vector<std::vector<int>> adj;  // edge-sharing adjacency
  std::vector<int> ring;              // BFS ring from the seed tile
  int rings = 0;

  int size() const { return static_cast<int>(center.size()); }
  std::vector<HPoint> tile_vertices(int t) const;  // all m vertices
  // tile containing p = Voronoi cell of the tile centers
  int locate(const HPoint& p) const;
};

RegularPatch generate_patch(const RegularTilingSpec& spec, int rings);

// ----- layer structure (square tiling) -----

struct LayerCensus {
  double tau = 0.0;
  std::vector<long long> occupied;  // per layer j=1..j_max: nonempty tiles
  std::vector<long long> total;     // layer-j tiles among occupied+their neighbors
};

LayerCensus layer_census(const SquareTilingSpec& spec, const HPoint& origin_pt,
                         const std::vector<HPoint>& points, int j_max);

// Distance from a point to a tile, approximated from below via the tile's
// corners and center (exact enough for layer binning).
double tile_distance(const SquareTilingSpec& spec, const TileId& t, const HPoint& p);

// Whether the tile meets the width-neighborhood of the hyperplane, tested on
// a 3^d lattice of box points (signed-distance sign change counts as a hit).
bool tile_meets_slab(const SquareTilingSpec& spec, const TileId& t, const Hyperplane& h,
                     double width);

}  // namespace hyp
