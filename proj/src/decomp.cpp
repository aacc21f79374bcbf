#include "hyp/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

#include "hyp/geom.hpp"

namespace hyp {
namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

TdReport validate_td(const Graph& g, const TreeDecomposition& td) {
  TdReport rep;
  rep.width = td.width();
  int nb = static_cast<int>(td.bags.size());
  if (td.tree.n != nb) {
    rep.violation = "tree node count differs from bag count";
    return rep;
  }
  if (nb > 0 && td.tree.edge_count() != nb - 1) {
    rep.violation = "tree edge count is not bags-1";
    return rep;
  }
  if (nb > 0 && !is_connected_subset(td.tree, [&] {
        std::vector<int> all(nb);
        for (int i = 0; i < nb; i++) all[i] = i;
        return all;
      }())) {
    rep.violation = "tree is not connected";
    return rep;
  }
  std::vector<std::vector<int>> in_bags(g.n);
  for (int b = 0; b < nb; b++) {
    for (int v : td.bags[b]) {
      if (v < 0 || v >= g.n) {
        rep.violation = "bag " + std::to_string(b) + " holds out-of-range vertex " +
                        std::to_string(v);
        return rep;
      }
      in_bags[v].push_back(b);
    }
  }
  for (int v = 0; v < g.n; v++) {
    if (in_bags[v].empty()) {
      rep.violation = "vertex " + std::to_string(v) + " is in no bag";
      return rep;
    }
  }
  for (int u = 0; u < g.n; u++) {
    for (int v : g.adj[u]) {
      if (v < u) continue;
      // in_bags lists are sorted (bags scanned in order)
      bool hit = false;
      const auto& a = in_bags[u];
      const auto& b = in_bags[v];
      size_t i = 0, j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
          hit = true;
          break;
        }
        if (a[i] < b[j])
          i++;
        else
          j++;
      }
      if (!hit) {
        rep.violation =
            "edge " + std::to_string(u) + "-" + std::to_string(v) + " is in no bag";
        return rep;
      }
    }
  }
  for (int v = 0; v < g.n; v++) {
    const auto& bs = in_bags[v];
    if (bs.size() <= 1) continue;
    std::set<int> want(bs.begin(), bs.end());
    std::vector<int> stack = {bs[0]};
    std::set<int> seen = {bs[0]};
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      for (int c : td.tree.adj[b])
        if (want.count(c) && !seen.count(c)) {
          seen.insert(c);
          stack.push_back(c);
        }
    }
    if (seen.size() != want.size()) {
      rep.violation =
          "bags holding vertex " + std::to_string(v) + " are not connected in the tree";
      return rep;
    }
  }
  rep.valid = true;
  return rep;
}

WeightedTreeDecomposition decompose_by_separators(const NubgInstance& inst,
                                                  const SquareTilingSpec& spec,
                                                  int min_size, uint64_t seed, int trials,
                                                  double eps_bal) {
  if (inst.g.n == 0) throw std::invalid_argument("decompose_by_separators: empty instance");
  if (min_size < 1) throw std::invalid_argument("decompose_by_separators: min_size < 1");
  Partition part = tiling_partition(inst, spec);
  QuotientGraph q = contract(inst.g, part);

  WeightedTreeDecomposition out;
  std::vector<std::pair<int, int>> tree_edges;
  uint64_t ctr = 0;

  auto make_bag = [&](std::vector<int> ids) {
    out.bags.push_back(sorted_unique(std::move(ids)));
    out.bag_weights.push_back(q.gamma(out.bags.back()));
    return static_cast<int>(out.bags.size()) - 1;
  };

  std::function<int(const std::vector<int>&, const std::vector<int>&, int)> rec =
      [&](const std::vector<int>& comp, const std::vector<int>& bound, int depth) -> int {
    out.depth = std::max(out.depth, depth);
    if (static_cast<int>(comp.size()) <= min_size) {
      std::vector<int> ids = comp;
      ids.insert(ids.end(), bound.begin(), bound.end());
      return make_bag(std::move(ids));
    }
    // sub-instance on the vertices of these classes
    std::vector<int> verts;
    for (int c : comp) verts.insert(verts.end(), q.classes[c].begin(), q.classes[c].end());
    std::sort(verts.begin(), verts.end());
    NubgInstance sub;
    sub.rho = inst.rho;
    sub.nu = inst.nu;
    sub.points.reserve(verts.size());
    // Recenter the component at its coordinate mean: centerpoint search
    // loses precision on point sets far from the origin. The separator is
    // mapped back through class membership of its vertices, so removing the
    // matching global classes still disconnects the component and can only
    // improve its balance.
    Vec mean(inst.points[verts[0]].x.size(), 0.0);
    for (int v : verts)
      for (size_t i = 0; i < mean.size(); i++) mean[i] += inst.points[v].x[i];
    Isometry recenter = translate_to(make_point(std::move(mean))).inverse();
    for (int v : verts) sub.points.push_back(recenter.apply(inst.points[v]));
    sub.g = induced_subgraph(inst.g, verts);
    CliqueSeparator sep =
        find_separator(sub, spec, trials, mix64(seed + 0x1000 * ++ctr), eps_bal);

    std::vector<int> sglob;
    for (int c : sep.classes) {
      int sub_v = sep.partition.classes[c].front();
      sglob.push_back(part.class_of[verts[sub_v]]);
    }
    sglob = sorted_unique(std::move(sglob));

    std::vector<int> bag_ids = sglob;
    bag_ids.insert(bag_ids.end(), bound.begin(), bound.end());
    int me = make_bag(bag_ids);
    std::vector<int> bagset = out.bags[me];

    // components of the class graph with the separator classes removed
    std::vector<char> in_comp(q.g.n, 0), in_sep(q.g.n, 0), seen(q.g.n, 0);
    for (int c : comp) in_comp[c] = 1;
    for (int c : sglob) in_sep[c] = 1;
    for (int c : comp) {
      if (seen[c] || in_sep[c]) continue;
      std::vector<int> cc, stack = {c};
      seen[c] = 1;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        cc.push_back(u);
        for (int w : q.g.adj[u])
          if (in_comp[w] && !in_sep[w] && !seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
      }
      std::sort(cc.begin(), cc.end());
      // boundary passed down: bag classes adjacent to this component
      std::vector<int> child_bound;
      std::vector<char> in_cc(q.g.n, 0);
      for (int u : cc) in_cc[u] = 1;
      for (int b : bagset) {
        for (int w : q.g.adj[b])
          if (in_cc[w]) {
            child_bound.push_back(b);
            break;
          }
      }
      int child = rec(cc, child_bound, depth + 1);
      tree_edges.emplace_back(me, child);
    }
    return me;
  };

  std::vector<int> all(q.g.n);
  for (int i = 0; i < q.g.n; i++) all[i] = i;
  rec(all, {}, 0);

  out.tree = Graph(static_cast<int>(out.bags.size()));
  for (auto [a, b] : tree_edges) out.tree.add_edge(a, b);
  out.weighted_width = 0.0;
  for (double w : out.bag_weights) out.weighted_width = std::max(out.weighted_width, w);
  out.partition = std::move(part);

  TreeDecomposition shape{out.bags, out.tree};
  TdReport rep = validate_td(q.g, shape);
  if (!rep.valid)
    throw std::logic_error("decompose_by_separators: invalid result: " + rep.violation);
  return out;
}

PeelResult layer_peel(const RegularPatch& patch, const std::vector<int>& tiles) {
  PeelResult res;
  std::vector<char> in(patch.size(), 0);
  for (int t : sorted_unique(tiles)) {
    if (t < 0 || t >= patch.size()) throw std::invalid_argument("layer_peel: bad tile id");
    in[t] = 1;
  }
  int remaining = static_cast<int>(sorted_unique(tiles).size());
  while (remaining > 0) {
    // complement region reachable from beyond the patch (outer ring acts as
    // the gateway to the unbounded face)
    std::vector<char> unb(patch.size(), 0);
    std::vector<int> stack;
    for (int t = 0; t < patch.size(); t++)
      if (patch.ring[t] == patch.rings && !in[t]) {
        unb[t] = 1;
        stack.push_back(t);
      }
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int u : patch.adj[t])
        if (!in[u] && !unb[u]) {
          unb[u] = 1;
          stack.push_back(u);
        }
    }
    std::vector<int> layer;
    for (int t = 0; t < patch.size(); t++) {
      if (!in[t]) continue;
      bool outer = patch.ring[t] == patch.rings;
      for (int u : patch.adj[t])
        if (unb[u]) outer = true;
      if (outer) layer.push_back(t);
    }
    if (layer.empty()) throw std::logic_error("layer_peel: no tile faces the outside");
    for (int t : layer) in[t] = 0;
    remaining -= static_cast<int>(layer.size());
    res.layers.push_back(std::move(layer));
  }
  res.outerplanarity = static_cast<int>(res.layers.size());
  return res;
}

Graph graph_power(const Graph& g, int k) {
  if (k < 1) throw std::invalid_argument("graph_power: k < 1");
  Graph out(g.n);
  std::vector<int> depth(g.n, -1);
  for (int s = 0; s < g.n; s++) {
    std::deque<int> bfs = {s};
    std::vector<int> touched = {s};
    depth[s] = 0;
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop_front();
      if (depth[u] == k) continue;
      for (int v : g.adj[u])
        if (depth[v] < 0) {
          depth[v] = depth[u] + 1;
          touched.push_back(v);
          bfs.push_back(v);
        }
    }
    for (int v : touched) {
      if (v > s) out.add_edge(s, v);
      depth[v] = -1;
    }
  }
  return out;
}

Graph blowup_graph(const Graph& g, int k) {
  if (k < 1) throw std::invalid_argument("blowup_graph: k < 1");
  Graph out(g.n * k);
  for (int u = 0; u < g.n; u++) {
    for (int i = 0; i < k; i++)
      for (int j = i + 1; j < k; j++) out.add_edge(u * k + i, u * k + j);
    for (int v : g.adj[u]) {
      if (v < u) continue;
      for (int i = 0; i < k; i++)
        for (int j = 0; j < k; j++) out.add_edge(u * k + i, v * k + j);
    }
  }
  return out;
}

TreeDecomposition power_decomposition(const TreeDecomposition& td, const Graph& g, int k) {
  if (k < 1) throw std::invalid_argument("power_decomposition: k < 1");
  TdReport rep = validate_td(g, td);
  if (!rep.valid)
    throw std::invalid_argument("power_decomposition: input invalid: " + rep.violation);
  int r = (k + 1) / 2;
  TreeDecomposition out;
  out.tree = td.tree;
  out.bags.reserve(td.bags.size());
  std::vector<int> depth(g.n, -1);
  for (const auto& bag : td.bags) {
    std::deque<int> bfs;
    std::vector<int> touched;
    for (int v : bag) {
      depth[v] = 0;
      bfs.push_back(v);
      touched.push_back(v);
    }
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop_front();
      if (depth[u] == r) continue;
      for (int v : g.adj[u])
        if (depth[v] < 0) {
          depth[v] = depth[u] + 1;
          touched.push_back(v);
          bfs.push_back(v);
        }
    }
    for (int v : touched) depth[v] = -1;
    out.bags.push_back(sorted_unique(std::move(touched)));
  }
  return out;
}

TreeDecomposition blowup_decomposition(const TreeDecomposition& td, int k) {
  if (k < 1) throw std::invalid_argument("blowup_decomposition: k < 1");
  TreeDecomposition out;
  out.tree = td.tree;
  out.bags.reserve(td.bags.size());
  for (const auto& bag : td.bags) {
    std::vector<int> nb;
    nb.reserve(bag.size() * k);
    for (int v : bag)
      for (int i = 0; i < k; i++) nb.push_back(v * k + i);
    out.bags.push_back(std::move(nb));
  }
  return out;
}

TreeDecomposition heuristic_decompose(const Graph& g) {
  TreeDecomposition td;
  if (g.n == 0) {
    td.tree = Graph(1);
    td.bags.push_back({});
    return td;
  }
  bool min_fill = g.n <= 20000;
  std::vector<std::set<int>> adj(g.n);
  for (int u = 0; u < g.n; u++) adj[u] = std::set<int>(g.adj[u].begin(), g.adj[u].end());
  std::vector<char> gone(g.n, 0);
  std::vector<int> elim_pos(g.n, -1);
  std::vector<int> order;
  order.reserve(g.n);
  td.bags.resize(g.n);

  auto fill_count = [&](int v) {
    long long score = 0;
    for (auto it = adj[v].begin(); it != adj[v].end(); ++it)
      for (auto jt = std::next(it); jt != adj[v].end(); ++jt)
        if (!adj[*it].count(*jt)) score++;
    return score;
  };
  // lazy min-fill queue: entries carry a version so that scores invalidated
  // by a neighborhood change are recomputed on pop; ties break to the
  // smallest id via the heap order
  using Entry = std::tuple<long long, int, long long>;  // score, vertex, version
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<long long> ver(g.n, 0);
  std::vector<char> dirty(g.n, 0);
  if (min_fill)
    for (int v = 0; v < g.n; v++) heap.emplace(fill_count(v), v, 0);

  for (int step = 0; step < g.n; step++) {
    int v = -1;
    if (min_fill) {
      for (;;) {
        auto [score, cand, cver] = heap.top();
        heap.pop();
        if (gone[cand] || cver != ver[cand]) continue;
        if (dirty[cand]) {
          dirty[cand] = 0;
          heap.emplace(fill_count(cand), cand, ver[cand]);
          continue;
        }
        v = cand;
        break;
      }
    } else {
      size_t best_deg = std::numeric_limits<size_t>::max();
      for (int u = 0; u < g.n; u++)
        if (!gone[u] && adj[u].size() < best_deg) {
          best_deg = adj[u].size();
          v = u;
        }
    }
    std::vector<int> bag(adj[v].begin(), adj[v].end());
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    td.bags[step] = std::move(bag);
    elim_pos[v] = step;
    order.push_back(v);
    for (auto it = adj[v].begin(); it != adj[v].end(); ++it)
      for (auto jt = std::next(it); jt != adj[v].end(); ++jt) {
        adj[*it].insert(*jt);
        adj[*jt].insert(*it);
      }
    for (int u : adj[v]) adj[u].erase(v);
    gone[v] = 1;
    if (min_fill) {
      // scores of the former neighbors and their neighbors may have changed
      auto invalidate = [&](int u) {
        if (dirty[u]) return;
        dirty[u] = 1;
        heap.emplace(-1, u, ++ver[u]);  // placeholder forcing a recompute
      };
      for (int u : adj[v]) {
        invalidate(u);
        for (int w : adj[u])
          if (!gone[w]) invalidate(w);
      }
    }
    adj[v].clear();
  }

  td.tree = Graph(g.n);
  for (int step = 0; step < g.n; step++) {
    int v = order[step];
    // attach to the bag of the first-eliminated vertex among the bag's
    // other members (all eliminated later than v)
    int parent = -1, parent_pos = g.n;
    for (int u : td.bags[step])
      if (u != v && elim_pos[u] < parent_pos) {
        parent_pos = elim_pos[u];
        parent = u;
      }
    if (parent >= 0)
      td.tree.add_edge(step, elim_pos[parent]);
    else if (step + 1 < g.n)
      td.tree.add_edge(step, step + 1);  // isolated remainder: chain the bags
  }
  return td;
}

int exact_treewidth(const Graph& g) {
  int n = g.n;
  if (n == 0) return -1;
  if (n > 24) throw std::invalid_argument("exact_treewidth: graph too large");
  std::vector<uint32_t> nb(n, 0);
  for (int u = 0; u < n; u++)
    for (int v : g.adj[u]) nb[u] |= 1u << v;
  // q(S, v): neighbors of v outside S reachable through S
  auto q = [&](uint32_t S, int v) {
    uint32_t reach = 1u << v, frontier = 1u << v, outside = 0;
    while (frontier) {
      uint32_t next = 0;
      for (uint32_t f = frontier; f;) {
        int u = std::countr_zero(f);
        f &= f - 1;
        outside |= nb[u] & ~S & ~(1u << v);
        next |= nb[u] & S & ~reach;
      }
      reach |= next;
      frontier = next;
    }
    return std::popcount(outside);
  };
  uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<int> f(full + 1, std::numeric_limits<int>::max());
  f[0] = -1;
  for (uint32_t S = 1; S <= full; S++) {
    for (uint32_t m = S; m;) {
      int v = std::countr_zero(m);
      m &= m - 1;
      uint32_t rest = S & ~(1u << v);
      int val = std::max(f[rest], q(rest, v));
      f[S] = std::min(f[S], val);
    }
  }
  return f[full];
}

namespace {

// Remove bags contained in a tree-neighbor's bag, reattaching their other
// neighbors; coverage and subtree connectivity are preserved and the width
// never grows.
TreeDecomposition prune_subset_bags(TreeDecomposition td) {
  int nb = static_cast<int>(td.bags.size());
  std::vector<std::set<int>> nbr(nb);
  for (int b = 0; b < nb; b++) nbr[b] = std::set<int>(td.tree.adj[b].begin(), td.tree.adj[b].end());
  std::vector<char> alive(nb, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int b = 0; b < nb; b++) {
      if (!alive[b]) continue;
      int host = -1;
      for (int c : nbr[b])
        if (std::includes(td.bags[c].begin(), td.bags[c].end(), td.bags[b].begin(),
                          td.bags[b].end())) {
          host = c;
          break;
        }
      if (host < 0) continue;
      for (int c : nbr[b]) {
        nbr[c].erase(b);
        if (c != host) {
          nbr[c].insert(host);
          nbr[host].insert(c);
        }
      }
      nbr[b].clear();
      alive[b] = 0;
      changed = true;
    }
  }
  TreeDecomposition out;
  std::vector<int> remap(nb, -1);
  for (int b = 0; b < nb; b++)
    if (alive[b]) {
      remap[b] = static_cast<int>(out.bags.size());
      out.bags.push_back(td.bags[b]);
    }
  out.tree = Graph(static_cast<int>(out.bags.size()));
  for (int b = 0; b < nb; b++)
    if (alive[b])
      for (int c : nbr[b])
        if (c > b) out.tree.add_edge(remap[b], remap[c]);
  return out;
}

int greedy_locate(const RegularPatch& patch, const HPoint& p, int start) {
  int cur = start;
  double cd = dist(patch.center[cur], p);
  for (;;) {
    int best = cur;
    double bd = cd;
    for (int u : patch.adj[cur]) {
      double d = dist(patch.center[u], p);
      if (d < bd) {
        bd = d;
        best = u;
      }
    }
    if (best == cur) return cur;
    cur = best;
    cd = bd;
  }
}

}  // namespace

TreeDecomposition shallow_decompose(const NubgInstance& inst, const RegularTilingSpec& spec,
                                    int max_occupancy) {
  int n = static_cast<int>(inst.points.size());
  if (n == 0) throw std::invalid_argument("shallow_decompose: empty instance");
  for (const auto& p : inst.points)
    if (p.dim() != 2)
      throw std::invalid_argument("shallow_decompose: needs points in the plane");

  int ell = static_cast<int>(std::ceil(2.0 * inst.rho * inst.nu / spec.sep_const)) + 1;

  double rmax = 0.0;
  HPoint o = origin(2);
  for (const auto& p : inst.points) rmax = std::max(rmax, dist(o, p));
  int rings =
      std::min(8, static_cast<int>(std::ceil(rmax / (2.0 * spec.po))) + ell + 2);

  RegularPatch patch;
  std::vector<int> tile_of(n);
  std::vector<int> sprime;
  for (;;) {
    if (rings > 8)
      throw std::runtime_error("shallow_decompose: instance spread exceeds the patch radius");
    patch = generate_patch(spec, rings);
    bool ok = true;
    int hint = 0;
    for (int i = 0; i < n && ok; i++) {
      tile_of[i] = greedy_locate(patch, inst.points[i], hint);
      hint = tile_of[i];
      if (dist(patch.center[tile_of[i]], inst.points[i]) > spec.ov + 1e-9) ok = false;
    }
    if (ok) {
      // expand the occupied tiles by ell rings of tiles
      std::vector<int> level(patch.size(), -1);
      std::deque<int> bfs;
      for (int t : sorted_unique(tile_of)) {
        level[t] = 0;
        bfs.push_back(t);
      }
      while (!bfs.empty()) {
        int t = bfs.front();
        bfs.pop_front();
        if (level[t] == ell) continue;
        for (int u : patch.adj[t])
          if (level[u] < 0) {
            level[u] = level[t] + 1;
            bfs.push_back(u);
          }
      }
      sprime.clear();
      int max_ring = 0;
      for (int t = 0; t < patch.size(); t++)
        if (level[t] >= 0) {
          sprime.push_back(t);
          max_ring = std::max(max_ring, patch.ring[t]);
        }
      if (max_ring < patch.rings) break;  // adjacency lists complete everywhere
    }
    rings += 2;
  }

  // per-tile occupancy, indices into sprime
  std::vector<int> sp_index(patch.size(), -1);
  for (int i = 0; i < static_cast<int>(sprime.size()); i++) sp_index[sprime[i]] = i;
  std::vector<std::vector<int>> members(sprime.size());
  for (int i = 0; i < n; i++) members[sp_index[tile_of[i]]].push_back(i);
  int kprime = 0;
  for (const auto& m : members) kprime = std::max(kprime, static_cast<int>(m.size()));
  if (max_occupancy > 0 && kprime > max_occupancy)
    throw std::runtime_error("shallow_decompose: tile occupancy " + std::to_string(kprime) +
                             " exceeds bound " + std::to_string(max_occupancy));

  Graph nbg(static_cast<int>(sprime.size()));
  for (int i = 0; i < nbg.n; i++)
    for (int u : patch.adj[sprime[i]])
      if (sp_index[u] > i) nbg.add_edge(i, sp_index[u]);

  TreeDecomposition base = heuristic_decompose(nbg);
  TreeDecomposition powered = power_decomposition(base, nbg, ell);

  // blow each tile up into its occupants (the k'-fold blowup restricted to
  // the vertices that exist)
  TreeDecomposition out;
  out.tree = powered.tree;
  out.bags.reserve(powered.bags.size());
  for (const auto& bag : powered.bags) {
    std::vector<int> vb;
    for (int t : bag) vb.insert(vb.end(), members[t].begin(), members[t].end());
    std::sort(vb.begin(), vb.end());
    out.bags.push_back(std::move(vb));
  }
  out = prune_subset_bags(std::move(out));

  TdReport rep = validate_td(inst.g, out);
  if (!rep.valid)
    throw std::logic_error("shallow_decompose: invalid result: " + rep.violation);
  return out;
}

TreeDecomposition expand_weighted(const WeightedTreeDecomposition& wtd,
                                  const Partition& part) {
  TreeDecomposition out;
  out.tree = wtd.tree;
  out.bags.reserve(wtd.bags.size());
  for (const auto& bag : wtd.bags) {
    std::vector<int> vb;
    for (int c : bag) {
      if (c < 0 || c >= static_cast<int>(part.classes.size()))
        throw std::invalid_argument("expand_weighted: class id out of range");
      vb.insert(vb.end(), part.classes[c].begin(), part.classes[c].end());
    }
    std::sort(vb.begin(), vb.end());
    out.bags.push_back(std::move(vb));
  }
  return out;
}

}  // namespace hyp
