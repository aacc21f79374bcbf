#include "hyp/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <stdexcept>

namespace hyp {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ----- square tiling -----

SquareTilingSpec square_tiling(int d, double delta) {
  if (d < 2) throw std::invalid_argument("square_tiling: d must be >= 2");
  if (delta <= 0) throw std::invalid_argument("square_tiling: delta must be positive");
  SquareTilingSpec spec;
  spec.d = d;
  spec.delta = delta;
  // The base tile [0,s]^{d-1} x [1,s+1] has diameter delta between opposite
  // corners: cosh(delta) = 1 + d*s^2 / (2(s+1)).
  const double c = std::cosh(delta) - 1.0;
  spec.s = (c + std::sqrt(c * c + 2.0 * d * c)) / d;
  spec.inradius = 0.5 * std::log(spec.s + 1.0);
  // Center: on the vertical axis through the lateral midpoint, at the height
  // minimizing the maximum corner distance. Distance to a fixed point is
  // convex along a geodesic (the vertical axis is one, with arclength ln h),
  // so the max over corners is convex in ln h and ternary search applies.
  TileId base;
  base.a.assign(d - 1, 0);
  base.b = 0;
  std::vector<HPoint> corners = tile_corners(spec, base);
  auto covering = [&](double t) {
    Vec y(d, spec.s / 2.0);
    y[d - 1] = std::exp(t);
    HPoint c = from_model(Model::halfspace, y);
    double worst = 0.0;
    for (const HPoint& q : corners) worst = std::max(worst, dist(c, q));
    return worst;
  };
  double lo = 0.0, hi = std::log(spec.s + 1.0);
  for (int it = 0; it < 200; ++it) {
    double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (covering(m1) <= covering(m2))
      hi = m2;
    else
      lo = m1;
  }
  spec.center_height = std::exp(0.5 * (lo + hi));
  spec.circumradius = covering(0.5 * (lo + hi));
  return spec;
}

std::string TileId::str() const {
  std::string out = std::to_string(b) + ":";
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(a[i]);
  }
  return out;
}

TileId locate(const SquareTilingSpec& spec, const HPoint& p) {
  const int d = spec.d;
  if (p.dim() != d) throw std::invalid_argument("locate: dimension mismatch");
  Vec y = convert(p, Model::halfspace);
  const double lf = spec.s + 1.0;
  long long b = static_cast<long long>(std::floor(std::log(y[d - 1]) / std::log(lf)));
  double f = std::pow(lf, static_cast<double>(b));
  // Fix up the floor against rounding in the log, with half-open level ranges
  // [f, f*lf).
  while (y[d - 1] < f) {
    --b;
    f = std::pow(lf, static_cast<double>(b));
  }
  while (y[d - 1] >= f * lf) {
    ++b;
    f = std::pow(lf, static_cast<double>(b));
  }
  const double yd = y[d - 1] / f;  // in [1, lf)
  if (yd - 1.0 < 1e-12 * yd && yd != 1.0)
    throw PrecisionError("locate: point within 1e-12 of a scale-level boundary");
  if (lf - yd < 1e-12 * lf)
    throw PrecisionError("locate: point within 1e-12 of a scale-level boundary");
  TileId t;
  t.b = b;
  t.a.resize(d - 1);
  for (int i = 0; i < d - 1; ++i)
    t.a[i] = static_cast<long long>(std::floor(y[i] / (spec.s * f)));
  return t;
}

Isometry tile_isometry(const SquareTilingSpec& spec, const std::vector<long long>& a,
                       long long b) {
  const int d = spec.d;
  if (static_cast<int>(a.size()) != d - 1)
    throw std::invalid_argument("tile_isometry: index size mismatch");
  // The half-space map y -> (s+1)^b (y + (s*a, 0)) factors into a horizontal
  // translation (a parabolic isometry) followed by a homothety (a boost along
  // the vertical axis); both have closed-form Lorentz matrices. Writing
  // u = x_0 - x_d and c for the translation vector, the translation acts as
  //   x_i += c_i u,   x_0 += c.x_lat + |c|^2 u / 2,   x_d += same.
  Isometry tr = identity_isometry(d);
  double cc = 0.0;
  for (int i = 0; i < d - 1; ++i) {
    const double ci = spec.s * static_cast<double>(a[i]);
    cc += ci * ci;
    tr.at(i + 1, 0) = ci;
    tr.at(i + 1, d) = -ci;
    tr.at(0, i + 1) = ci;
    tr.at(d, i + 1) = ci;
  }
  tr.at(0, 0) = 1.0 + cc / 2.0;
  tr.at(0, d) = -cc / 2.0;
  tr.at(d, 0) = cc / 2.0;
  tr.at(d, d) = 1.0 - cc / 2.0;
  // Scaling y_d by (s+1)^b means x_0 - x_d shrinks by the same factor: a
  // boost of rapidity t = b*ln(s+1) in the (x_0, x_d) plane.
  const double t = static_cast<double>(b) * std::log(spec.s + 1.0);
  Isometry sc = identity_isometry(d);
  sc.at(0, 0) = std::cosh(t);
  sc.at(0, d) = std::sinh(t);
  sc.at(d, 0) = std::sinh(t);
  sc.at(d, d) = std::cosh(t);
  return sc.compose(tr);
}

TileBox tile_box(const SquareTilingSpec& spec, const TileId& t) {
  const int d = spec.d;
  const double f = std::pow(spec.s + 1.0, static_cast<double>(t.b));
  TileBox box;
  box.lo.resize(d);
  box.hi.resize(d);
  for (int i = 0; i < d - 1; ++i) {
    box.lo[i] = spec.s * t.a[i] * f;
    box.hi[i] = spec.s * (t.a[i] + 1) * f;
  }
  box.lo[d - 1] = f;
  box.hi[d - 1] = f * (spec.s + 1.0);
  return box;
}

HPoint tile_center(const SquareTilingSpec& spec, const TileId& t) {
  const int d = spec.d;
  TileBox box = tile_box(spec, t);
  Vec y(d);
  for (int i = 0; i < d - 1; ++i) y[i] = 0.5 * (box.lo[i] + box.hi[i]);
  y[d - 1] = spec.center_height * box.lo[d - 1];
  return from_model(Model::halfspace, y);
}

std::vector<HPoint> tile_corners(const SquareTilingSpec& spec, const TileId& t) {
  const int d = spec.d;
  TileBox box = tile_box(spec, t);
  std::vector<HPoint> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vec y(d);
    for (int i = 0; i < d; ++i) y[i] = (mask >> i & 1) ? box.hi[i] : box.lo[i];
    out.push_back(from_model(Model::halfspace, y));
  }
  return out;
}

std::vector<TileId> neighbors(const SquareTilingSpec& spec, const TileId& t) {
  const int d = spec.d;
  std::vector<TileId> out;
  // Same level: the 3^{d-1}-1 lateral translates.
  std::vector<long long> off(d - 1, -1);
  while (true) {
    bool all_zero = true;
    for (long long o : off)
      if (o != 0) all_zero = false;
    if (!all_zero) {
      TileId n = t;
      for (int i = 0; i < d - 1; ++i) n.a[i] += off[i];
      out.push_back(n);
    }
    int i = 0;
    while (i < d - 1 && off[i] == 1) off[i++] = -1;
    if (i == d - 1) break;
    ++off[i];
  }
  // Cross level: tiles one level up/down whose Euclidean shadows overlap in
  // more than a corner. Shadows are compared in units of (s+1)^min(b,b').
  const double s = spec.s, lf = spec.s + 1.0;
  auto cross = [&](long long db) {
    // Shadow of t: [s*a_i*g, s*(a_i+1)*g] with g = 1 (db=+1) or lf (db=-1);
    // candidate shadow: [s*a'_i*g', ...] with g' = lf (db=+1) or 1 (db=-1).
    const double g = (db > 0) ? 1.0 : lf;
    const double gp = (db > 0) ? lf : 1.0;
    std::vector<std::pair<long long, long long>> range(d - 1);
    for (int i = 0; i < d - 1; ++i) {
      double lo = t.a[i] * g / gp, hi = (t.a[i] + 1) * g / gp;
      range[i] = {static_cast<long long>(std::floor(lo)) - 1,
                  static_cast<long long>(std::ceil(hi)) + 1};
    }
    std::vector<long long> ap(d - 1);
    for (int i = 0; i < d - 1; ++i) ap[i] = range[i].first;
    while (true) {
      bool nonempty = true, positive = false;
      for (int i = 0; i < d - 1; ++i) {
        double scale = std::max({1.0, std::abs(static_cast<double>(t.a[i])),
                                 std::abs(static_cast<double>(ap[i]))});
        double eps = 1e-9 * s * scale;
        double ov = std::min(s * (t.a[i] + 1) * g, s * (ap[i] + 1) * gp) -
                    std::max(s * t.a[i] * g, s * ap[i] * gp);
        if (ov < -eps) nonempty = false;
        if (ov > eps) positive = true;
      }
      if (nonempty && positive) {
        TileId n;
        n.a = ap;
        n.b = t.b + db;
        out.push_back(n);
      }
      int i = 0;
      while (i < d - 1 && ap[i] == range[i].second) ap[i] = range[i].first, ++i;
      if (i == d - 1) break;
      ++ap[i];
    }
  };
  cross(+1);
  cross(-1);
  return out;
}

// ----- regular tilings -----

double RegularTilingSpec::diameter() const {
  // Max vertex-to-vertex distance: vertices k apart on the circumcircle are
  // acosh(cosh^2(ov) - sinh^2(ov) cos(2 pi k / m)) apart, maximal at
  // k = floor(m/2).
  const double ang = 2.0 * kPi * static_cast<double>(gon / 2) / static_cast<double>(gon);
  const double ch = std::cosh(ov), sh = std::sinh(ov);
  return std::acosh(ch * ch - sh * sh * std::cos(ang));
}

RegularTilingSpec regular_tiling(int delta, int q, long long gon_override) {
  RegularTilingSpec spec;
  spec.delta = gon_override ? 0 : delta;
  spec.meet = q;
  spec.gon = gon_override ? gon_override : (1LL << (delta + 2));
  const long long m = spec.gon;
  if ((m - 2) * (q - 2) <= 4)
    throw std::invalid_argument("regular_tiling: (m-2)(q-2) must exceed 4");
  const double am = kPi / static_cast<double>(m), aq = kPi / q;
  spec.ov = std::acosh(1.0 / (std::tan(am) * std::tan(aq)));
  spec.vp = std::acosh(std::cos(am) / std::sin(aq));
  spec.po = std::acosh(std::cos(aq) / std::sin(am));
  spec.side_len = 2.0 * spec.vp;
  spec.area = kPi * static_cast<double>(m - 2) - 2.0 * kPi * static_cast<double>(m) / q;
  spec.perimeter = static_cast<double>(m) * spec.side_len;
  spec.sep_const = spec.side_len * (1.0 - 1e-6);
  return spec;
}

namespace {

// Dedup index for patch tile centers, bucketed on the spatial hyperboloid
// coordinates: centers of distinct tiles are at hyperbolic distance >= 2*po,
// which keeps their spatial coordinates >= sqrt(2(cosh(2*po)-1)) apart, while
// numerically-duplicated centers agree to far better than a bucket.
struct CenterIndex {
  static constexpr double kBucket = 0.3;
  std::map<std::pair<long long, long long>, std::vector<int>> buckets;
  const std::vector<HPoint>* centers;

  static std::pair<long long, long long> key(const HPoint& p) {
    return {llround(p.x[1] / kBucket), llround(p.x[2] / kBucket)};
  }

  int find(const HPoint& p) const {
    auto [kr, kt] = key(p);
    for (long long dr = -1; dr <= 1; ++dr)
      for (long long dt = -1; dt <= 1; ++dt) {
        auto it = buckets.find({kr + dr, kt + dt});
        if (it == buckets.end()) continue;
        for (int id : it->second) {
          const Vec& c = (*centers)[id].x;
          double m = 0.0;
          for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(c[i] - p.x[i]));
          if (m < 0.2) return id;
        }
      }
    return -1;
  }

  void insert(const HPoint& p, int id) { buckets[key(p)].push_back(id); }
};

}  // namespace

std::vector<HPoint> RegularPatch::tile_vertices(int t) const {
  const long long m = spec.gon;
  Isometry to = translate_to(center[t]);
  Isometry back = to.inverse();
  Vec w = back.apply(vertex0[t]).x;
  const double phi = std::atan2(w[2], w[1]);
  const double ch = std::cosh(spec.ov), sh = std::sinh(spec.ov);
  std::vector<HPoint> out;
  out.reserve(m);
  for (long long k = 0; k < m; ++k) {
    double ang = phi + 2.0 * kPi * k / static_cast<double>(m);
    out.push_back(to.apply(make_point({ch, sh * std::cos(ang), sh * std::sin(ang)})));
  }
  return out;
}

int RegularPatch::locate(const HPoint& p) const {
  int best = -1;
  double bd = 0.0;
  for (int t = 0; t < size(); ++t) {
    double dd = dist(center[t], p);
    if (best < 0 || dd < bd) {
      best = t;
      bd = dd;
    }
  }
  return best;
}

RegularPatch generate_patch(const RegularTilingSpec& spec, int rings) {
  if (spec.gon > 1000000)
    throw std::invalid_argument("generate_patch: tile has too many sides");
  // Beyond 8 rings the fixed-width center dedup starts missing duplicates
  // (coordinates grow like e^r while their error grows like e^{2r} eps).
  if (rings > 8) throw std::invalid_argument("generate_patch: more than 8 rings");
  RegularPatch patch;
  patch.spec = spec;
  patch.rings = rings;
  const double ch = std::cosh(spec.ov), sh = std::sinh(spec.ov);
  patch.center.push_back(origin(2));
  patch.vertex0.push_back(make_point({ch, sh, 0.0}));
  patch.adj.emplace_back();
  patch.ring.push_back(0);
  CenterIndex index;
  index.centers = &patch.center;
  index.insert(patch.center[0], 0);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    std::vector<HPoint> vs = patch.tile_vertices(u);
    const long long m = spec.gon;
    for (long long k = 0; k < m; ++k) {
      // The perpendicular from the center to an edge meets it at the edge
      // midpoint, so the reflected center lies 2*po along that geodesic.
      // Working with local geodesic steps instead of reflection matrices
      // keeps the construction conditioned at large patch radii.
      const HPoint& va = vs[k];
      const HPoint& vb = vs[(k + 1) % m];
      HPoint mid = geodesic_point(va, vb, 0.5 * dist(va, vb));
      HPoint nc = geodesic_point(patch.center[u], mid, 2.0 * spec.po);
      int w = index.find(nc);
      if (w < 0) {
        if (patch.ring[u] >= rings) continue;  // don't grow past the last ring
        w = patch.size();
        patch.center.push_back(nc);
        patch.vertex0.push_back(va);  // shared edge endpoint: a vertex of both
        patch.adj.emplace_back();
        patch.ring.push_back(patch.ring[u] + 1);
        index.insert(nc, w);
        queue.push_back(w);
      }
      patch.adj[u].push_back(w);
    }
  }
  for (auto& v : patch.adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return patch;
}

// ----- layers -----

double tile_distance(const SquareTilingSpec& spec, const TileId& t, const HPoint& p) {
  double best = dist(tile_center(spec, t), p);
  for (const HPoint& q : tile_corners(spec, t)) best = std::min(best, dist(q, p));
  return best;
}

bool tile_meets_slab(const SquareTilingSpec& spec, const TileId& t, const Hyperplane& h,
                     double width) {
  const int d = spec.d;
  // Quick reject on the circumscribed ball around the tile center.
  if (std::abs(dist_to_hyperplane(tile_center(spec, t), h)) > width + spec.circumradius)
    return false;
  TileBox box = tile_box(spec, t);
  bool pos = false, neg = false;
  int combos = 1;
  for (int i = 0; i < d; ++i) combos *= 3;
  for (int mask = 0; mask < combos; ++mask) {
    Vec y(d);
    int m = mask;
    for (int i = 0; i < d; ++i, m /= 3)
      y[i] = box.lo[i] + 0.5 * (m % 3) * (box.hi[i] - box.lo[i]);
    double sd = dist_to_hyperplane(from_model(Model::halfspace, y), h);
    if (std::abs(sd) <= width) return true;
    (sd > 0 ? pos : neg) = true;
    // Sign change between two lattice points: the hyperplane crosses the
    // segment between them, which lies inside the (Euclidean-convex) box.
    if (pos && neg) return true;
  }
  return false;
}

LayerCensus layer_census(const SquareTilingSpec& spec, const HPoint& origin_pt,
                         const std::vector<HPoint>& points, int j_max) {
  LayerCensus census;
  census.tau = spec.delta;
  census.occupied.assign(j_max, 0);
  census.total.assign(j_max, 0);
  std::map<TileId, bool> seen;  // tile -> occupied
  for (const HPoint& p : points) seen[locate(spec, p)] = true;
  std::map<TileId, bool> reach = seen;
  for (const auto& [t, occ] : seen)
    for (const TileId& n : neighbors(spec, t)) reach.emplace(n, false);
  for (const auto& [t, occ] : reach) {
    int j = static_cast<int>(std::floor(tile_distance(spec, t, origin_pt) / census.tau)) + 1;
    if (j < 1 || j > j_max) continue;
    ++census.total[j - 1];
    if (occ) ++census.occupied[j - 1];
  }
  return census;
}

}  // namespace hyp
