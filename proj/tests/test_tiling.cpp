#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "hyp/geom.hpp"
#include "hyp/tiling.hpp"

using namespace hyp;
constexpr double kPi = std::numbers::pi;

namespace {

// Least-squares slope of y over x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

HPoint base_tile_center(const SquareTilingSpec& spec) {
  TileId t;
  t.a.assign(spec.d - 1, 0);
  t.b = 0;
  return tile_center(spec, t);
}

}  // namespace

TEST_CASE("square tiling constants") {
  {
    SquareTilingSpec spec = square_tiling(2, 1e-4);
    CHECK(spec.s < 1e-4);
  }
  {
    SquareTilingSpec spec = square_tiling(2, 1.0);
    CHECK(spec.s == doctest::Approx(1.05692).epsilon(1e-4));
    CHECK(spec.inradius == doctest::Approx(0.36060).epsilon(1e-4));
  }
  {
    SquareTilingSpec spec = square_tiling(3, 2.0);
    double back = std::acosh(1.0 + 3.0 * spec.s * spec.s / (2.0 * (spec.s + 1.0)));
    CHECK(back == doctest::Approx(2.0).epsilon(1e-9));
  }
  // Defining relation, closed form, and shape bounds across dimensions/sizes.
  for (int d : {2, 3, 4}) {
    for (double delta : {0.1, 0.5, 1.0, 2.5, 5.0, 10.0}) {
      SquareTilingSpec spec = square_tiling(d, delta);
      double c = std::cosh(delta) - 1.0;
      CHECK(std::acosh(1.0 + d * spec.s * spec.s / (2.0 * (spec.s + 1.0))) ==
            doctest::Approx(delta).epsilon(1e-9));
      CHECK(spec.s == doctest::Approx((c + std::sqrt(c * c + 2 * d * c)) / d).epsilon(1e-12));
      CHECK(spec.inradius <= delta);
      CHECK(spec.inradius >= delta / 8.0);
      CHECK(spec.circumradius <= delta * (1.0 + 1e-9));
      CHECK(spec.circumradius >= spec.inradius);
    }
  }
  CHECK_THROWS(square_tiling(2, 0.0));
  CHECK_THROWS(square_tiling(2, -1.0));
  CHECK_THROWS(square_tiling(1, 1.0));
}

TEST_CASE("locate basics and round trips") {
  for (int d : {2, 3}) {
    SquareTilingSpec spec = square_tiling(d, 1.0);
    TileId zero;
    zero.a.assign(d - 1, 0);
    zero.b = 0;
    CHECK(locate(spec, base_tile_center(spec)) == zero);

    // Half-space point with last coordinate (s+1)^{1.5} sits at level 1.
    Vec y(d, 0.1);
    y[d - 1] = std::pow(spec.s + 1.0, 1.5);
    CHECK(locate(spec, from_model(Model::halfspace, y)).b == 1);

    // tile_isometry / locate round trip on random indices.
    Rng rng(7001 + d);
    std::uniform_int_distribution<long long> lat(-50, 50), lvl(-6, 6);
    for (int it = 0; it < 100; ++it) {
      TileId t;
      t.a.resize(d - 1);
      for (auto& ai : t.a) ai = lat(rng);
      t.b = lvl(rng);
      Isometry iso = tile_isometry(spec, t.a, t.b);
      CHECK(locate(spec, iso.apply(base_tile_center(spec))) == t);
    }
  }
}

TEST_CASE("locate is a partition with half-open boxes") {
  for (int d : {2, 3}) {
    SquareTilingSpec spec = square_tiling(d, 0.8);
    Rng rng(1234 + d);
    for (int it = 0; it < 10000; ++it) {
      HPoint p = random_ball_point(d, 8.0, rng);
      TileId t = locate(spec, p);
      TileBox box = tile_box(spec, t);
      Vec y = convert(p, Model::halfspace);
      for (int i = 0; i < d; ++i) {
        double span = box.hi[i] - box.lo[i];
        CHECK(y[i] >= box.lo[i] - 1e-9 * span);
        CHECK(y[i] <= box.hi[i] + 1e-9 * span);
      }
    }
  }
}

TEST_CASE("locate rejects points too close to a scale boundary") {
  SquareTilingSpec spec = square_tiling(2, 1.0);
  Vec y = {0.3, (spec.s + 1.0) * (1.0 + 3e-13)};
  CHECK_THROWS_AS(locate(spec, from_model(Model::halfspace, y)), PrecisionError);
  Vec y2 = {0.3, (spec.s + 1.0) * (1.0 - 3e-13)};
  CHECK_THROWS_AS(locate(spec, from_model(Model::halfspace, y2)), PrecisionError);
  // Comfortably inside a level is fine.
  Vec y3 = {0.3, (spec.s + 1.0) * 1.001};
  CHECK(locate(spec, from_model(Model::halfspace, y3)).b == 1);
}

TEST_CASE("tile_isometry identity, composition, distance preservation") {
  for (int d : {2, 3}) {
    SquareTilingSpec spec = square_tiling(d, 1.0);
    // (0, 0) is the identity.
    std::vector<long long> zero(d - 1, 0);
    Isometry id = tile_isometry(spec, zero, 0);
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j)
        CHECK(id.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));

    // f_{a,b} = f_{0,b} . f_{a,0}.
    Rng rng(99 + d);
    std::vector<long long> a(d - 1);
    for (auto& ai : a) ai = std::uniform_int_distribution<long long>(-20, 20)(rng);
    long long b = 3;
    Isometry whole = tile_isometry(spec, a, b);
    Isometry split = tile_isometry(spec, zero, b).compose(tile_isometry(spec, a, 0));
    for (int it = 0; it < 20; ++it) {
      HPoint p = random_ball_point(d, 3.0, rng);
      HPoint q1 = whole.apply(p), q2 = split.apply(p);
      for (int i = 0; i <= d; ++i)
        CHECK(q1.x[i] == doctest::Approx(q2.x[i]).epsilon(1e-8));
    }

    // Distances are preserved.
    Isometry iso = tile_isometry(spec, a, -2);
    for (int it = 0; it < 1000; ++it) {
      HPoint p = random_ball_point(d, 4.0, rng), q = random_ball_point(d, 4.0, rng);
      CHECK(std::abs(dist(p, q) - dist(iso.apply(p), iso.apply(q))) < 1e-8);
    }

    // The inverse of a tile's isometry carries its corners back to the base
    // tile's corners.
    TileId t;
    t.a = a;
    t.b = -2;
    TileId base;
    base.a = zero;
    base.b = 0;
    Isometry back = tile_isometry(spec, t.a, t.b).inverse();
    std::vector<HPoint> got = tile_corners(spec, t), want = tile_corners(spec, base);
    REQUIRE(got.size() == want.size());
    for (size_t k = 0; k < got.size(); ++k) {
      HPoint g = back.apply(got[k]);
      for (int i = 0; i <= d; ++i)
        CHECK(g.x[i] == doctest::Approx(want[k].x[i]).epsilon(1e-8).scale(1.0));
    }
  }
}

namespace {

// Brute-force cross-level neighbor oracle: measure the overlap of the shared
// horizontal boundary directly from the tile boxes over a dumb wide scan.
std::set<TileId> oracle_cross_neighbors(const SquareTilingSpec& spec, const TileId& t) {
  std::set<TileId> out;
  const int d = spec.d;
  TileBox tb = tile_box(spec, t);
  for (long long db : {-1LL, 1LL}) {
    std::vector<long long> lo(d - 1), hi(d - 1);
    for (int i = 0; i < d - 1; ++i) {
      // Wide scan window around the rescaled index.
      double scale = std::pow(spec.s + 1.0, static_cast<double>(-db));
      lo[i] = static_cast<long long>(std::floor(t.a[i] * scale)) - 5;
      hi[i] = static_cast<long long>(std::ceil((t.a[i] + 1) * scale)) + 5;
    }
    std::vector<long long> a(lo);
    while (true) {
      TileId c;
      c.a = a;
      c.b = t.b + db;
      TileBox cb = tile_box(spec, c);
      bool nonempty = true, positive = false;
      for (int i = 0; i < d - 1; ++i) {
        double ov = std::min(tb.hi[i], cb.hi[i]) - std::max(tb.lo[i], cb.lo[i]);
        double eps = 1e-9 * (tb.hi[i] - tb.lo[i]);
        if (ov < -eps) nonempty = false;
        if (ov > eps) positive = true;
      }
      if (nonempty && positive) out.insert(c);
      int i = 0;
      while (i < d - 1 && a[i] == hi[i]) a[i] = lo[i], ++i;
      if (i == d - 1) break;
      ++a[i];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("square tiling neighbors") {
  for (int d : {2, 3}) {
    SquareTilingSpec spec = square_tiling(d, 1.2);
    TileId zero;
    zero.a.assign(d - 1, 0);
    zero.b = 0;
    std::vector<TileId> nb = neighbors(spec, zero);
    std::set<TileId> nbset(nb.begin(), nb.end());
    CHECK(nbset.size() == nb.size());  // no duplicates

    // Lateral translates are always present.
    int laterals = 0;
    for (const TileId& n : nb)
      if (n.b == 0) ++laterals;
    int expect = 1;
    for (int i = 0; i < d - 1; ++i) expect *= 3;
    CHECK(laterals == expect - 1);
    if (d == 2) {
      TileId left = zero, right = zero;
      left.a[0] = -1;
      right.a[0] = 1;
      CHECK(nbset.count(left));
      CHECK(nbset.count(right));
    }

    // Cross-level sets match the geometric brute-force oracle, for the base
    // tile and for random tiles.
    Rng rng(555 + d);
    std::uniform_int_distribution<long long> lat(-40, 40), lvl(-4, 4);
    for (int it = 0; it < 40; ++it) {
      TileId t = zero;
      if (it > 0) {
        for (auto& ai : t.a) ai = lat(rng);
        t.b = lvl(rng);
      }
      std::set<TileId> got;
      for (const TileId& n : neighbors(spec, t))
        if (n.b != t.b) got.insert(n);
      CHECK(got == oracle_cross_neighbors(spec, t));
    }
  }
}

TEST_CASE("square tiling neighbor symmetry on a five-level patch") {
  SquareTilingSpec spec = square_tiling(2, 1.0);
  std::set<TileId> patch;
  for (long long b = -2; b <= 2; ++b)
    for (long long a = -60; a <= 60; ++a) {
      TileId t;
      t.a = {a};
      t.b = b;
      patch.insert(t);
    }
  for (const TileId& t : patch) {
    for (const TileId& n : neighbors(spec, t)) {
      if (!patch.count(n)) continue;
      std::vector<TileId> back = neighbors(spec, n);
      CHECK(std::find(back.begin(), back.end(), t) != back.end());
    }
  }
}

TEST_CASE("regular tiling constants") {
  RegularTilingSpec oct = regular_tiling(1);
  CHECK(oct.gon == 8);
  CHECK(oct.meet == 3);
  CHECK(oct.ov == doctest::Approx(0.86064).epsilon(1e-4));
  CHECK(oct.vp == doctest::Approx(0.36353).epsilon(1e-4));
  CHECK(oct.side_len == doctest::Approx(2 * oct.vp));
  CHECK(oct.perimeter == doctest::Approx(16 * oct.vp));
  CHECK(oct.sep_const == doctest::Approx(2 * oct.vp * (1 - 1e-6)));
  CHECK(oct.area > 0);
  CHECK(oct.area / oct.perimeter > 0);

  // Formula invariants across the family and the pentagon variant.
  auto check_formulas = [](const RegularTilingSpec& spec) {
    double am = kPi / static_cast<double>(spec.gon), aq = kPi / spec.meet;
    CHECK(spec.ov == doctest::Approx(std::acosh(1.0 / std::tan(aq) / std::tan(am))).epsilon(1e-9));
    CHECK(spec.vp == doctest::Approx(std::acosh(std::cos(am) / std::sin(aq))).epsilon(1e-9));
    CHECK(spec.po == doctest::Approx(std::acosh(std::cos(aq) / std::sin(am))).epsilon(1e-9));
    CHECK(spec.area ==
          doctest::Approx(2.0 * static_cast<double>(spec.gon) * (kPi / 2 - aq - am))
              .epsilon(1e-9));
  };
  for (int delta = 1; delta <= 8; ++delta) check_formulas(regular_tiling(delta));

  RegularTilingSpec pent = regular_tiling(0, 4, 5);
  CHECK(pent.gon == 5);
  CHECK(pent.meet == 4);
  CHECK(pent.vp == doctest::Approx(0.53064).epsilon(1e-4));
  CHECK(pent.side_len == doctest::Approx(2 * pent.vp));
  check_formulas(pent);

  // Area/perimeter ratio grows in delta and clears 0.953 by delta = 30.
  double prev = 0.0;
  for (int delta = 1; delta <= 30; ++delta) {
    RegularTilingSpec spec = regular_tiling(delta);
    double ratio = spec.area / spec.perimeter;
    CHECK(ratio > prev);
    prev = ratio;
  }
  CHECK(prev > 0.953);

  // Euclidean and spherical Schlaefli pairs are rejected.
  CHECK_THROWS(regular_tiling(0, 4, 4));
  CHECK_THROWS(regular_tiling(0, 3, 6));
  CHECK_THROWS(regular_tiling(0, 3, 3));
}

TEST_CASE("regular patch structure") {
  RegularTilingSpec spec = regular_tiling(1);
  RegularPatch patch = generate_patch(spec, 2);
  REQUIRE(patch.size() > 9);
  CHECK(patch.ring[0] == 0);
  CHECK(patch.adj[0].size() == 8);

  // Vertices: m per tile, all at distance ov from the center, sides of the
  // right length.
  for (int t : {0, 1, patch.size() - 1}) {
    std::vector<HPoint> vs = patch.tile_vertices(t);
    REQUIRE(vs.size() == 8);
    for (const HPoint& v : vs)
      CHECK(dist(patch.center[t], v) == doctest::Approx(spec.ov).epsilon(1e-6));
    for (int k = 0; k < 8; ++k)
      CHECK(dist(vs[k], vs[(k + 1) % 8]) == doctest::Approx(spec.side_len).epsilon(1e-6));
  }

  // Adjacent tiles: centers 2*po apart and two shared vertices; adjacency is
  // symmetric.
  for (int u = 0; u < patch.size(); ++u) {
    std::vector<HPoint> uv = patch.tile_vertices(u);
    for (int w : patch.adj[u]) {
      CHECK(dist(patch.center[u], patch.center[w]) == doctest::Approx(2 * spec.po).epsilon(1e-6));
      CHECK(std::find(patch.adj[w].begin(), patch.adj[w].end(), u) != patch.adj[w].end());
      int shared = 0;
      for (const HPoint& a : uv)
        for (const HPoint& b : patch.tile_vertices(w))
          if (dist(a, b) < 1e-6) ++shared;
      CHECK(shared == 2);
    }
  }

  // Distinct tiles never have close centers.
  for (int u = 0; u < patch.size(); ++u)
    for (int w = u + 1; w < patch.size(); ++w)
      CHECK(dist(patch.center[u], patch.center[w]) > 2 * spec.po * 0.999);

  // Non-neighboring tiles keep the separation constant, measured between
  // vertex sets.
  for (int u = 0; u < patch.size(); ++u) {
    std::vector<HPoint> uv = patch.tile_vertices(u);
    for (int w = u + 1; w < patch.size(); ++w) {
      if (std::find(patch.adj[u].begin(), patch.adj[u].end(), w) != patch.adj[u].end())
        continue;
      double best = 1e9;
      for (const HPoint& a : uv)
        for (const HPoint& b : patch.tile_vertices(w)) best = std::min(best, dist(a, b));
      CHECK(best >= spec.sep_const);
    }
  }

  // Voronoi locate returns each tile for its own center, and nearby tiles for
  // random points.
  Rng rng(42);
  for (int t = 0; t < patch.size(); ++t) CHECK(patch.locate(patch.center[t]) == t);
  for (int it = 0; it < 200; ++it) {
    HPoint p = random_ball_point(2, 2 * spec.po, rng);
    int t = patch.locate(p);
    CHECK(dist(patch.center[t], p) <= spec.ov + 1e-9);
  }
}

TEST_CASE("regular patch growth: pentagon variant and larger rings") {
  RegularTilingSpec pent = regular_tiling(0, 4, 5);
  RegularPatch patch = generate_patch(pent, 3);
  CHECK(patch.adj[0].size() == 5);
  // Exponential growth: each ring strictly larger than the previous.
  std::vector<int> per_ring(4, 0);
  for (int t = 0; t < patch.size(); ++t) ++per_ring[patch.ring[t]];
  CHECK(per_ring[0] == 1);
  CHECK(per_ring[1] == 5);
  for (int j = 2; j <= 3; ++j) CHECK(per_ring[j] > per_ring[j - 1]);
  // Interior tiles (ring < rings) see all their neighbors in the patch.
  for (int t = 0; t < patch.size(); ++t)
    if (patch.ring[t] < 2) CHECK(patch.adj[t].size() == 5);
}

TEST_CASE("layer census and occupied-tile scaling") {
  {
    SquareTilingSpec spec = square_tiling(2, 1.0);
    LayerCensus census = layer_census(spec, origin(2), {}, 5);
    for (long long c : census.occupied) CHECK(c == 0);
  }

  // Occupied-tile counts for balls of growing radius scale like e^{(d-1)r}.
  struct Setup {
    int d;
    double delta;
    std::vector<double> radii;
    double per_tile;  // sampling density multiplier
  };
  for (const Setup& su :
       {Setup{2, 2.5, {4.0, 6.0, 8.0, 10.0}, 50.0}, Setup{3, 2.0, {2.5, 3.5, 4.5, 5.5}, 30.0}}) {
    SquareTilingSpec spec = square_tiling(su.d, su.delta);
    Rng rng(2024 + su.d);
    std::vector<double> xs, ys;
    for (double r : su.radii) {
      long long n = static_cast<long long>(su.per_tile * std::exp((su.d - 1) * r));
      std::set<TileId> occ;
      for (long long it = 0; it < n; ++it) occ.insert(locate(spec, random_ball_point(su.d, r, rng)));
      xs.push_back(r);
      ys.push_back(std::log(static_cast<double>(occ.size())));
    }
    double slope = fit_slope(xs, ys) / (su.d - 1);
    CHECK(slope > 0.85);
    CHECK(slope < 1.15);
  }

  // layer_census agrees with direct counting for a concrete sample.
  {
    SquareTilingSpec spec = square_tiling(2, 1.0);
    Rng rng(7);
    std::vector<HPoint> pts;
    for (int i = 0; i < 3000; ++i) pts.push_back(random_ball_point(2, 5.0, rng));
    LayerCensus census = layer_census(spec, origin(2), pts, 8);
    std::set<TileId> occ;
    for (const HPoint& p : pts) occ.insert(locate(spec, p));
    std::vector<long long> want(8, 0);
    for (const TileId& t : occ) {
      int j = static_cast<int>(std::floor(tile_distance(spec, t, origin(2)) / census.tau)) + 1;
      if (j >= 1 && j <= 8) ++want[j - 1];
    }
    for (int j = 0; j < 8; ++j) {
      CHECK(census.occupied[j] == want[j]);
      CHECK(census.total[j] >= census.occupied[j]);
    }
    long long occ_sum = 0;
    for (long long c : census.occupied) occ_sum += c;
    CHECK(occ_sum == static_cast<long long>(occ.size()));
  }
}

TEST_CASE("hyperplane slab hits decay with layer distance") {
  const int d = 2;
  SquareTilingSpec spec = square_tiling(d, 1.0);
  const double tau = spec.delta;

  // Fixed tiles along the x-axis, one per layer.
  std::vector<TileId> tiles;
  std::vector<double> layer_x;
  for (int j = 2; j <= 7; ++j) {
    double r = (j - 0.45) * tau;
    TileId t = locate(spec, make_point({std::cosh(r), std::sinh(r), 0.0}));
    int layer = static_cast<int>(std::floor(tile_distance(spec, t, origin(d)) / tau)) + 1;
    tiles.push_back(t);
    layer_x.push_back(layer * tau);
  }

  Rng rng(90210);
  const int trials = 300000;
  std::vector<long long> hits(tiles.size(), 0);
  for (int it = 0; it < trials; ++it) {
    Hyperplane h = random_hyperplane_through(origin(d), rng);
    for (size_t k = 0; k < tiles.size(); ++k)
      if (tile_meets_slab(spec, tiles[k], h, spec.delta)) ++hits[k];
  }
  std::vector<double> xs, ys;
  for (size_t k = 0; k < tiles.size(); ++k) {
    REQUIRE(hits[k] > 50);  // enough mass for the fit
    xs.push_back(layer_x[k]);
    ys.push_back(std::log(static_cast<double>(hits[k]) / trials));
  }
  // Frequencies decay monotonically and at least as fast as e^{-0.8 j tau}.
  for (size_t k = 1; k < tiles.size(); ++k) CHECK(hits[k] < hits[k - 1]);
  CHECK(fit_slope(xs, ys) <= -0.8);
}

TEST_CASE("tile ids print as level:indices") {
  TileId t;
  t.a = {3, -1};
  t.b = -2;
  CHECK(t.str() == "-2:3,-1");
}
