#include "hyp/nubg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace hyp {

NubgInstance build_graph(const std::vector<HPoint>& points, double rho, double nu,
                         const NoisePolicy& policy) {
  if (rho <= 0) throw std::invalid_argument("build_graph: rho must be positive");
  if (nu < 1) throw std::invalid_argument("build_graph: nu must be at least 1");
  NubgInstance inst;
  inst.points = points;
  inst.rho = rho;
  inst.nu = nu;
  const int n = static_cast<int>(points.size());
  inst.g = Graph(n);
  Rng rng(policy.seed);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dd = dist(points[i], points[j]);
      bool edge = false;
      if (dd < 2 * rho) {
        edge = true;
      } else if (dd <= 2 * rho * nu) {
        switch (policy.kind) {
          case NoisePolicy::none: edge = false; break;
          case NoisePolicy::all: edge = true; break;
          case NoisePolicy::bernoulli:
            edge = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < policy.p;
            break;
        }
      }
      if (edge) inst.g.add_edge(i, j);
    }
  return inst;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

int count_within(const std::vector<HPoint>& points, const HPoint& c, double r) {
  int k = 0;
  for (const HPoint& p : points)
    if (dist(p, c) <= r * (1.0 + 1e-9)) ++k;
  return k;
}

// The two centers at distance rho from both p and q (dist(p,q) <= 2*rho),
// found on the perpendicular bisector: with half-distance h, the offset w
// satisfies cosh(rho) = cosh(h) cosh(w).
std::vector<HPoint> two_point_centers(const HPoint& p, const HPoint& q, double rho) {
  const double h = 0.5 * dist(p, q);
  if (h > rho || p.dim() != 2) return {};
  const double w = std::acosh(std::max(1.0, std::cosh(rho) / std::cosh(h)));
  HPoint mid = geodesic_point(p, q, h);
  Isometry to = translate_to(mid);
  Vec qq = to.inverse().apply(q).x;
  double ang = std::atan2(qq[2], qq[1]);
  std::vector<HPoint> out;
  for (double side : {ang + kPi / 2.0, ang - kPi / 2.0}) {
    out.push_back(
        to.apply(make_point({std::cosh(w), std::sinh(w) * std::cos(side),
                             std::sinh(w) * std::sin(side)})));
  }
  return out;
}

}  // namespace

Shallowness shallowness(const std::vector<HPoint>& points, double rho) {
  if (points.empty()) throw std::invalid_argument("shallowness: empty point set");
  Shallowness sh;
  const int n = static_cast<int>(points.size());
  for (int i = 0; i < n; ++i) {
    sh.lower = std::max(sh.lower, count_within(points, points[i], rho));
    sh.upper = std::max(sh.upper, count_within(points, points[i], 2 * rho));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dd = dist(points[i], points[j]);
      if (dd > 2 * rho) continue;
      HPoint mid = geodesic_point(points[i], points[j], dd / 2.0);
      sh.lower = std::max(sh.lower, count_within(points, mid, rho));
      for (const HPoint& c : two_point_centers(points[i], points[j], rho))
        sh.lower = std::max(sh.lower, count_within(points, c, rho));
    }
  return sh;
}

Partition tiling_partition(const NubgInstance& inst, const SquareTilingSpec& spec) {
  if (spec.delta >= inst.rho)
    throw std::invalid_argument("tiling_partition: tile diameter must stay below rho");
  Partition part;
  part.kind = Partition::clique;
  part.kappa_bound = 1;
  const int n = static_cast<int>(inst.points.size());
  part.class_of.assign(n, -1);
  std::map<TileId, int> cls;
  for (int v = 0; v < n; ++v) {
    TileId t = locate(spec, inst.points[v]);
    auto [it, fresh] = cls.emplace(t, static_cast<int>(part.classes.size()));
    if (fresh) part.classes.emplace_back();
    part.classes[it->second].push_back(v);
    part.class_of[v] = it->second;
  }
  return part;
}

Partition tiling_partition(const NubgInstance& inst) {
  if (inst.points.empty()) throw std::invalid_argument("tiling_partition: empty instance");
  SquareTilingSpec spec =
      square_tiling(inst.points[0].dim(), inst.rho * (1.0 - 1.0 / 100.0));
  return tiling_partition(inst, spec);
}

Partition greedy_partition(const Graph& g, uint64_t seed) {
  Partition part;
  part.kind = Partition::greedy;
  part.class_of.assign(g.n, -1);
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> blocked(g.n, 0);
  for (int v : order) {
    if (blocked[v]) continue;
    blocked[v] = 1;
    part.class_of[v] = static_cast<int>(part.centers.size());
    part.centers.push_back(v);
    part.classes.push_back({v});
    for (int w : g.adj[v]) blocked[w] = 1;
  }
  // Non-centers join the class of their first neighbor (in the random order)
  // that became a center.
  for (int v : order) {
    if (part.class_of[v] >= 0) continue;
    for (int w : order) {
      if (part.class_of[w] < 0 || part.centers[part.class_of[w]] != w) continue;
      if (g.has_edge(v, w)) {
        part.class_of[v] = part.class_of[w];
        part.classes[part.class_of[w]].push_back(v);
        break;
      }
    }
    if (part.class_of[v] < 0)
      throw std::logic_error("greedy_partition: independent set not maximal");
  }
  return part;
}

double QuotientGraph::gamma(const std::vector<int>& nodes) const {
  double s = 0.0;
  for (int v : nodes) s += weight[v];
  return s;
}

QuotientGraph contract(const Graph& g, const Partition& part) {
  for (int c : part.class_of)
    if (c < 0) throw std::invalid_argument("contract: partition does not cover V");
  QuotientGraph q;
  const int k = static_cast<int>(part.classes.size());
  q.g = Graph(k);
  q.classes = part.classes;
  q.weight.resize(k);
  for (int c = 0; c < k; ++c)
    q.weight[c] = std::log2(static_cast<double>(part.classes[c].size()) + 1.0);
  for (auto [u, v] : g.edges())
    if (part.class_of[u] != part.class_of[v]) q.g.add_edge(part.class_of[u], part.class_of[v]);
  return q;
}

std::vector<std::vector<int>> kappa_cover(const Graph& g, const std::vector<int>& cls,
                                          const NubgInstance* inst) {
  std::vector<std::vector<int>> parts;
  if (inst) {
    // Seed the cover with the clique partition induced by a fine tiling.
    SquareTilingSpec spec =
        square_tiling(inst->points[0].dim(), inst->rho * (1.0 - 1.0 / 100.0));
    std::map<TileId, int> groups;
    for (int v : cls) {
      TileId t = locate(spec, inst->points[v]);
      auto [it, fresh] = groups.emplace(t, static_cast<int>(parts.size()));
      if (fresh) parts.emplace_back();
      parts[it->second].push_back(v);
    }
  } else {
    // Greedy: grow a clique from the highest-degree uncovered vertex.
    std::vector<int> left = cls;
    while (!left.empty()) {
      int pick = 0;
      for (size_t i = 1; i < left.size(); ++i)
        if (g.degree(left[i]) > g.degree(left[pick])) pick = static_cast<int>(i);
      std::vector<int> clique{left[pick]};
      left.erase(left.begin() + pick);
      for (auto it = left.begin(); it != left.end();) {
        bool all = true;
        for (int u : clique)
          if (!g.has_edge(u, *it)) {
            all = false;
            break;
          }
        if (all) {
          clique.push_back(*it);
          it = left.erase(it);
        } else {
          ++it;
        }
      }
      parts.push_back(clique);
    }
  }
  // Merge parts whose union is still a clique.
  for (size_t i = 0; i < parts.size(); ++i)
    for (size_t j = parts.size(); j-- > i + 1;) {
      bool ok = true;
      for (int u : parts[i]) {
        for (int v : parts[j])
          if (!g.has_edge(u, v)) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (ok) {
        parts[i].insert(parts[i].end(), parts[j].begin(), parts[j].end());
        parts.erase(parts.begin() + j);
      }
    }
  return parts;
}

}  // namespace hyp
