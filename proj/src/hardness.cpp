#include "hyp/hardness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <stdexcept>

#include "json.hpp"

namespace hyp {

namespace {

constexpr double kPi = 3.14159265358979323846;

int lit_var(int lit) { return lit > 0 ? lit : -lit; }

void check_cnf_shape(const CnfFormula& f) {
  for (const auto& cl : f.clauses) {
    if (cl.size() > 3) throw std::invalid_argument("clause wider than 3 literals");
    for (int lit : cl)
      if (lit == 0 || lit_var(lit) > f.num_vars)
        throw std::invalid_argument("literal out of range");
  }
}

}  // namespace

CnfFormula read_dimacs(std::istream& in) {
  CnfFormula f;
  std::string line;
  bool have_header = false;
  std::vector<int> cur;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      int nc = 0;
      if (!(ls >> p >> fmt >> f.num_vars >> nc) || fmt != "cnf")
        throw std::invalid_argument("bad DIMACS header at line " + std::to_string(lineno));
      have_header = true;
      continue;
    }
    if (!have_header) throw std::invalid_argument("DIMACS clause before header at line " + std::to_string(lineno));
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        f.clauses.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(lit);
      }
    }
    if (!ls.eof()) throw std::invalid_argument("bad DIMACS token at line " + std::to_string(lineno));
  }
  if (!have_header) throw std::invalid_argument("missing DIMACS header");
  if (!cur.empty()) f.clauses.push_back(cur);
  return f;
}

void write_dimacs(std::ostream& out, const CnfFormula& f) {
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& cl : f.clauses) {
    for (int lit : cl) out << lit << ' ';
    out << "0\n";
  }
}

CnfFormula normalize_cnf(const CnfFormula& f) {
  check_cnf_shape(f);
  std::vector<std::vector<int>> cls = f.clauses;
  // Assignments forced so far; propagation loop runs to a fixed point.
  std::map<int, bool> fixed;
  bool contradiction = false;
  for (bool changed = true; changed && !contradiction;) {
    changed = false;
    // Clean literal lists against fixed assignments, duplicates, tautologies.
    std::vector<std::vector<int>> next;
    for (auto& cl : cls) {
      std::vector<int> kept;
      bool satisfied = false;
      for (int lit : cl) {
        auto it = fixed.find(lit_var(lit));
        if (it != fixed.end()) {
          if (it->second == (lit > 0)) satisfied = true;
          continue;
        }
        if (std::find(kept.begin(), kept.end(), lit) == kept.end()) kept.push_back(lit);
      }
      if (satisfied) {
        changed = true;
        continue;
      }
      bool taut = false;
      for (int lit : kept)
        if (std::find(kept.begin(), kept.end(), -lit) != kept.end()) taut = true;
      if (taut) {
        changed = true;
        continue;
      }
      if (kept.size() != cl.size()) changed = true;
      next.push_back(std::move(kept));
    }
    cls = std::move(next);
    for (const auto& cl : cls) {
      if (cl.empty()) {
        contradiction = true;
        break;
      }
      if (cl.size() == 1 && !fixed.count(lit_var(cl[0]))) {
        fixed[lit_var(cl[0])] = cl[0] > 0;
        changed = true;
      }
    }
    if (changed || contradiction) continue;
    // Single-occurrence variables can always satisfy their clause.
    std::map<int, int> occ;
    for (const auto& cl : cls)
      for (int lit : cl) occ[lit_var(lit)]++;
    for (size_t i = 0; i < cls.size() && !changed; ++i)
      for (int lit : cls[i])
        if (occ[lit_var(lit)] == 1) {
          fixed[lit_var(lit)] = lit > 0;
          changed = true;
          break;
        }
  }
  CnfFormula out;
  if (contradiction) {
    out.clauses.push_back({});
    return out;
  }
  std::map<int, int> renum;
  for (const auto& cl : cls)
    for (int lit : cl)
      if (!renum.count(lit_var(lit))) {
        int id = static_cast<int>(renum.size()) + 1;
        renum[lit_var(lit)] = id;
      }
  out.num_vars = static_cast<int>(renum.size());
  for (const auto& cl : cls) {
    std::vector<int> mapped;
    for (int lit : cl) mapped.push_back(lit > 0 ? renum[lit] : -renum[-lit]);
    std::sort(mapped.begin(), mapped.end(), [](int a, int b) {
      return std::pair(lit_var(a), a) < std::pair(lit_var(b), b);
    });
    out.clauses.push_back(std::move(mapped));
  }
  return out;
}

GridTilingInstance sat_to_gridtiling(const CnfFormula& f) {
  CnfFormula p = normalize_cnf(f);
  GridTilingInstance out;
  out.mode = GridTilingInstance::eq;
  out.k = 1;
  out.N = 1;
  out.sets.assign(1, std::vector<std::vector<std::pair<int, int>>>(1));
  for (const auto& cl : p.clauses)
    if (cl.empty()) return out;  // contradiction: one empty cell
  if (p.clauses.empty()) {
    out.sets[0][0].push_back({1, 1});
    return out;
  }
  int m = static_cast<int>(p.clauses.size());
  int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))));
  // Contiguous clause groups of near-equal size.
  std::vector<std::vector<int>> group(static_cast<size_t>(k));
  for (int i = 0; i < m; ++i) group[static_cast<size_t>(i) * k / m].push_back(i);
  std::vector<std::vector<int>> vars(static_cast<size_t>(k));
  for (int a = 0; a < k; ++a) {
    std::set<int> vs;
    for (int ci : group[a])
      for (int lit : p.clauses[ci]) vs.insert(lit_var(lit));
    vars[a].assign(vs.begin(), vs.end());
    if (vars[a].size() > 16) throw std::runtime_error("clause group too large for enumeration");
  }
  int N = 1;
  for (int a = 0; a < k; ++a) N = std::max(N, 1 << vars[a].size());
  // value of var under group a's assignment mask, or -1 if var not in group
  auto value = [&](int a, uint32_t mask, int var) -> int {
    auto it = std::lower_bound(vars[a].begin(), vars[a].end(), var);
    if (it == vars[a].end() || *it != var) return -1;
    return (mask >> (it - vars[a].begin())) & 1u;
  };
  std::vector<std::vector<uint32_t>> sat(static_cast<size_t>(k));
  for (int a = 0; a < k; ++a) {
    uint32_t total = 1u << vars[a].size();
    for (uint32_t mask = 0; mask < total; ++mask) {
      bool ok = true;
      for (int ci : group[a]) {
        bool s = false;
        for (int lit : p.clauses[ci])
          if (value(a, mask, lit_var(lit)) == (lit > 0 ? 1 : 0)) s = true;
        if (!s) {
          ok = false;
          break;
        }
      }
      if (ok) sat[a].push_back(mask);
    }
  }
  out.k = k;
  out.N = N;
  out.sets.assign(static_cast<size_t>(k),
                  std::vector<std::vector<std::pair<int, int>>>(static_cast<size_t>(k)));
  // Cell (a,b) carries (x,y) = (assignment index for group b, for group a).
  // First coordinates chain along the a direction and second coordinates
  // along the b direction, so a solution fixes one assignment per group;
  // diagonal cells force the two indices of the same group to agree.
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      std::vector<int> shared;
      for (int v : vars[a])
        if (std::binary_search(vars[b].begin(), vars[b].end(), v)) shared.push_back(v);
      for (uint32_t mb : sat[b])
        for (uint32_t ma : sat[a]) {
          bool ok = true;
          for (int v : shared)
            if (value(a, ma, v) != value(b, mb, v)) {
              ok = false;
              break;
            }
          if (ok) out.sets[a][b].push_back({static_cast<int>(mb) + 1, static_cast<int>(ma) + 1});
        }
    }
  return out;
}

std::optional<std::vector<std::vector<std::pair<int, int>>>> gt_brute(
    const GridTilingInstance& inst) {
  if (inst.k < 1 || inst.k > 4 || inst.N < 1 || inst.N > 8)
    throw std::invalid_argument("gt_brute caps: k <= 4, N <= 8");
  if (static_cast<int>(inst.sets.size()) != inst.k)
    throw std::invalid_argument("grid tiling sets shape mismatch");
  for (const auto& row : inst.sets)
    if (static_cast<int>(row.size()) != inst.k)
      throw std::invalid_argument("grid tiling sets shape mismatch");
  int k = inst.k;
  bool leq = inst.mode == GridTilingInstance::leq;
  std::vector<std::vector<std::pair<int, int>>> pick(
      static_cast<size_t>(k), std::vector<std::pair<int, int>>(static_cast<size_t>(k)));
  // Row-major DFS; each placement is checked against its a- and b-predecessors.
  std::function<bool(int)> go = [&](int cell) -> bool {
    if (cell == k * k) return true;
    int a = cell / k, b = cell % k;
    for (const auto& w : inst.sets[a][b]) {
      if (a > 0) {
        const auto& up = pick[a - 1][b];
        if (leq ? up.first > w.first : up.first != w.first) continue;
      }
      if (b > 0) {
        const auto& left = pick[a][b - 1];
        if (leq ? left.second > w.second : left.second != w.second) continue;
      }
      pick[a][b] = w;
      if (go(cell + 1)) return true;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return pick;
}

std::string write_gt_json(const GridTilingInstance& inst) {
  nlohmann::json j;
  j["k"] = inst.k;
  j["N"] = inst.N;
  j["mode"] = inst.mode == GridTilingInstance::eq ? "eq" : "leq";
  auto& sets = j["sets"] = nlohmann::json::array();
  for (int a = 0; a < inst.k; ++a)
    for (int b = 0; b < inst.k; ++b) {
      nlohmann::json cell = nlohmann::json::array();
      for (const auto& w : inst.sets[a][b]) cell.push_back({w.first, w.second});
      sets.push_back({a + 1, b + 1, cell});
    }
  return j.dump(2);
}

GridTilingInstance read_gt_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GridTilingInstance inst;
  inst.k = j.at("k").get<int>();
  inst.N = j.at("N").get<int>();
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "eq")
    inst.mode = GridTilingInstance::eq;
  else if (mode == "leq")
    inst.mode = GridTilingInstance::leq;
  else
    throw std::invalid_argument("grid tiling mode must be eq or leq");
  if (inst.k < 1 || inst.N < 1) throw std::invalid_argument("bad grid tiling dimensions");
  inst.sets.assign(static_cast<size_t>(inst.k),
                   std::vector<std::vector<std::pair<int, int>>>(static_cast<size_t>(inst.k)));
  for (const auto& entry : j.at("sets")) {
    int a = entry.at(0).get<int>(), b = entry.at(1).get<int>();
    if (a < 1 || a > inst.k || b < 1 || b > inst.k)
      throw std::invalid_argument("grid tiling cell index out of range");
    for (const auto& w : entry.at(2)) {
      int x = w.at(0).get<int>(), y = w.at(1).get<int>();
      if (x < 1 || x > inst.N || y < 1 || y > inst.N)
        throw std::invalid_argument("grid tiling element out of range");
      inst.sets[a - 1][b - 1].push_back({x, y});
    }
  }
  return inst;
}

namespace {

// Gamma, the vertex/side graph of a pentagon-tiling patch. Coinciding tile
// corners are merged by quantized-coordinate lookup: duplicates agree to
// ~1e-12 while distinct vertices are at least one side length apart.
struct GammaGraph {
  std::vector<HPoint> pos;
  Graph g;
  std::vector<std::vector<int>> tile_corner;  // per tile, 5 vertex ids
};

GammaGraph build_gamma(const RegularPatch& patch) {
  GammaGraph out;
  std::map<std::pair<long long, long long>, int> lookup;
  auto key_of = [](const HPoint& p) {
    return std::pair(llround(p.x[1] * 10), llround(p.x[2] * 10));
  };
  auto intern = [&](const HPoint& p) {
    auto k = key_of(p);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = lookup.find({k.first + dx, k.second + dy});
        if (it != lookup.end() && dist(out.pos[it->second], p) < 0.3) return it->second;
      }
    int id = static_cast<int>(out.pos.size());
    out.pos.push_back(p);
    lookup[k] = id;
    return id;
  };
  out.tile_corner.resize(static_cast<size_t>(patch.size()));
  for (int t = 0; t < patch.size(); ++t)
    for (const HPoint& c : patch.tile_vertices(t)) out.tile_corner[t].push_back(intern(c));
  out.g = Graph(static_cast<int>(out.pos.size()));
  for (const auto& corners : out.tile_corner) {
    size_t m = corners.size();
    for (size_t i = 0; i < m; ++i) out.g.add_edge(corners[i], corners[(i + 1) % m]);
  }
  return out;
}

HPoint polar_point(double r, double phi) {
  return make_point({std::cosh(r), std::sinh(r) * std::cos(phi), std::sinh(r) * std::sin(phi)});
}

// Angle normalized to [-pi/4, 7pi/4) so the grid's angular range [0, ~pi]
// sits away from the branch cut.
double norm_angle(const HPoint& p) {
  double phi = std::atan2(p.x[2], p.x[1]);
  if (phi < -kPi / 4) phi += 2 * kPi;
  return phi;
}

}  // namespace

GridEmbedding build_grid_embedding(int n_param, int k) {
  if (n_param < 1) throw std::invalid_argument("n_param must be positive");
  if (k < 1 || k > 3) throw std::invalid_argument("grid side must be in 1..3");
  GridEmbedding emb;
  RegularTilingSpec spec = regular_tiling(0, 4, 5);
  emb.k = k;
  emb.n_param = n_param;
  emb.rho = spec.vp;
  emb.delta = spec.diameter();
  emb.r0 = std::asinh(std::sinh(4 * emb.delta) * n_param);
  emb.beta = 2 * kPi / n_param;

  // Compact placement: rows on circles 2.2 apart, columns on rays pi/2
  // apart. Row/column corridors of distinct index are then disjoint, and the
  // downstream adjacency argument is placement-generic, so the reference
  // radius r0 enters only through the reported fields above.
  const double r_base = 1.7, r_step = 2.2;
  const double row_halfwidth = 1.6, col_halfwidth = 1.5, ang_margin = 0.3;
  double r_max = r_base + r_step * (k - 1);
  int rings = static_cast<int>(std::ceil((r_max + 2.0) / (2 * spec.po))) + 1;
  emb.patch = generate_patch(spec, std::max(rings, 2));
  GammaGraph gg = build_gamma(emb.patch);
  emb.vertex_pos = gg.pos;
  emb.gamma = gg.g;
  int nv = emb.gamma.n;
  std::vector<double> vr(static_cast<size_t>(nv)), vphi(static_cast<size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    vr[static_cast<size_t>(v)] = radius(emb.vertex_pos[static_cast<size_t>(v)]);
    vphi[static_cast<size_t>(v)] = norm_angle(emb.vertex_pos[static_cast<size_t>(v)]);
  }

  // Place grid images at the Gamma vertices nearest the polar targets. The
  // angular step takes a small deterministic jitter, redrawn until every
  // target is strictly interior to a tile and images stay pairwise far
  // enough apart that no tile holds two of them.
  double dphi = 0, phi0 = 0;
  bool placed = false;
  for (int jit = 0; jit < 60 && !placed; ++jit) {
    // Base angle off the patch's symmetry axes, so no target rides a tile
    // boundary; the jitter rescales both angles until the checks pass.
    dphi = (kPi / 2) * (1.0 + 1e-3 * jit);
    phi0 = 0.11 * (1.0 + 1e-2 * jit);
    emb.grid.assign(static_cast<size_t>(k), std::vector<int>(static_cast<size_t>(k), -1));
    placed = true;
    std::vector<int> images;
    for (int a = 0; a < k && placed; ++a)
      for (int b = 0; b < k && placed; ++b) {
        HPoint target = polar_point(r_base + r_step * a, phi0 + dphi * b);
        double best = 1e18, second = 1e18;
        for (int t = 0; t < emb.patch.size(); ++t) {
          double d = dist(emb.patch.center[static_cast<size_t>(t)], target);
          if (d < best) {
            second = best;
            best = d;
          } else if (d < second) {
            second = d;
          }
        }
        if (second - best < 1e-6) {  // target rides a tile boundary
          placed = false;
          break;
        }
        int bestv = -1;
        double bestd = 1e18;
        for (int v = 0; v < nv; ++v) {
          double d = dist(emb.vertex_pos[static_cast<size_t>(v)], target);
          if (d < bestd) {
            bestd = d;
            bestv = v;
          }
        }
        for (int prev : images)
          if (dist(emb.vertex_pos[static_cast<size_t>(prev)],
                   emb.vertex_pos[static_cast<size_t>(bestv)]) < emb.delta + 1e-9)
            placed = false;
        images.push_back(bestv);
        emb.grid[static_cast<size_t>(a)][static_cast<size_t>(b)] = bestv;
      }
  }
  if (!placed) throw std::runtime_error("grid placement failed");

  std::vector<char> used(static_cast<size_t>(nv), 0);
  for (auto& row : emb.grid)
    for (int v : row) used[static_cast<size_t>(v)] = 1;

  // Each grid vertex hands its (at most four) incident arcs distinct
  // neighbors as entry/exit ports, matched to the arc's heading. Reserving
  // ports up front stops one arc from sealing off another arc's endpoint.
  // Slots: 0 = outward (to a+1), 1 = inward (from a-1), 2 = east (to b+1),
  // 3 = west (from b-1).
  std::vector<std::array<int, 4>> ports(static_cast<size_t>(k * k), {-1, -1, -1, -1});
  std::vector<char> reserved(static_cast<size_t>(nv), 0);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      int v = emb.grid[static_cast<size_t>(a)][static_cast<size_t>(b)];
      // slot headings in the local (radial, tangential) frame
      std::vector<std::pair<int, double>> want;  // slot, heading angle
      if (a + 1 < k) want.push_back({0, 0.0});
      if (a > 0) want.push_back({1, kPi});
      if (b + 1 < k) want.push_back({2, kPi / 2});
      if (b > 0) want.push_back({3, -kPi / 2});
      const auto& nbrs = emb.gamma.adj[static_cast<size_t>(v)];
      std::vector<double> heading(nbrs.size());
      for (size_t i = 0; i < nbrs.size(); ++i) {
        int w = nbrs[i];
        double rm = 0.5 * (vr[static_cast<size_t>(v)] + vr[static_cast<size_t>(w)]);
        double dr = vr[static_cast<size_t>(w)] - vr[static_cast<size_t>(v)];
        double dt = (vphi[static_cast<size_t>(w)] - vphi[static_cast<size_t>(v)]) * std::sinh(rm);
        heading[i] = std::atan2(dt, dr);
      }
      // exact min-mismatch matching over all injective slot->neighbor maps
      std::vector<size_t> order(nbrs.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::vector<size_t> best;
      double best_cost = 1e18;
      std::sort(order.begin(), order.end());
      do {
        double c = 0;
        bool ok = true;
        for (size_t s = 0; s < want.size(); ++s) {
          int w = nbrs[order[s]];
          if (used[static_cast<size_t>(w)] || reserved[static_cast<size_t>(w)]) {
            ok = false;
            break;
          }
          double diff = std::fabs(heading[order[s]] - want[s].second);
          if (diff > kPi) diff = 2 * kPi - diff;
          c += diff;
        }
        if (ok && c < best_cost - 1e-12) {
          best_cost = c;
          best = order;
        }
      } while (std::next_permutation(order.begin(), order.end()));
      if (best.empty()) throw std::runtime_error("grid vertex port assignment failed");
      for (size_t s = 0; s < want.size(); ++s) {
        int w = nbrs[best[s]];
        ports[static_cast<size_t>(a * k + b)][static_cast<size_t>(want[s].first)] = w;
        reserved[static_cast<size_t>(w)] = 1;
      }
    }

  // Hyperbolic distance from a vertex to the ray at angle phi; the window
  // checks keep the foot of the perpendicular on the ray's radius range.
  auto ray_dist = [&](int v, double phi) {
    double d = std::fabs(vphi[static_cast<size_t>(v)] - phi);
    if (d > kPi / 2) return 1e18;
    return std::asinh(std::sinh(vr[static_cast<size_t>(v)]) * std::sin(d));
  };

  auto route = [&](int a, int b, bool adir) {
    int src = emb.grid[static_cast<size_t>(a)][static_cast<size_t>(b)];
    int dst = adir ? emb.grid[static_cast<size_t>(a + 1)][static_cast<size_t>(b)]
                   : emb.grid[static_cast<size_t>(a)][static_cast<size_t>(b + 1)];
    int sport = ports[static_cast<size_t>(a * k + b)][adir ? 0 : 2];
    int dport = adir ? ports[static_cast<size_t>((a + 1) * k + b)][1]
                     : ports[static_cast<size_t>(a * k + b + 1)][3];
    auto in_corridor = [&](int v) {
      if (adir) {
        double lo = r_base + r_step * a - 0.8, hi = r_base + r_step * (a + 1) + 0.8;
        return vr[static_cast<size_t>(v)] >= lo && vr[static_cast<size_t>(v)] <= hi &&
               ray_dist(v, phi0 + dphi * b) <= col_halfwidth;
      }
      double ra = r_base + r_step * a;
      return std::fabs(vr[static_cast<size_t>(v)] - ra) <= row_halfwidth &&
             vphi[static_cast<size_t>(v)] >= phi0 + dphi * b - ang_margin &&
             vphi[static_cast<size_t>(v)] <= phi0 + dphi * (b + 1) + ang_margin;
    };
    GridEmbedding::Arc arc;
    arc.a = a;
    arc.b = b;
    arc.adir = adir;
    if (sport == dport) {
      arc.seq = {src, sport, dst};
    } else {
      // Shortest port-to-port path with a steep penalty off the corridor:
      // arcs follow their own strip, and when earlier interiors fragment it
      // the detour stays as local as the blockage allows. Grid vertices and
      // ports reserved for other arcs are off limits.
      auto blocked = [&](int v) {
        if (v == sport || v == dport) return false;
        return used[static_cast<size_t>(v)] != 0 || reserved[static_cast<size_t>(v)] != 0;
      };
      std::vector<long long> cost(static_cast<size_t>(nv), -1);
      std::vector<int> parent(static_cast<size_t>(nv), -2);
      std::set<std::pair<long long, int>> frontier;
      cost[static_cast<size_t>(sport)] = 0;
      parent[static_cast<size_t>(sport)] = -1;
      frontier.insert({0, sport});
      while (!frontier.empty()) {
        auto [c, v] = *frontier.begin();
        frontier.erase(frontier.begin());
        if (v == dport) break;
        for (int w : emb.gamma.adj[static_cast<size_t>(v)]) {
          if (blocked(w)) continue;
          long long cw = c + (in_corridor(w) ? 1 : 1000);
          if (cost[static_cast<size_t>(w)] == -1 || cw < cost[static_cast<size_t>(w)]) {
            frontier.erase({cost[static_cast<size_t>(w)], w});
            cost[static_cast<size_t>(w)] = cw;
            parent[static_cast<size_t>(w)] = v;
            frontier.insert({cw, w});
          }
        }
      }
      if (parent[static_cast<size_t>(dport)] == -2)
        throw std::runtime_error("corridor routing failed");
      arc.seq.push_back(src);
      std::vector<int> mid;
      for (int v = dport; v != -1; v = parent[static_cast<size_t>(v)]) mid.push_back(v);
      std::reverse(mid.begin(), mid.end());
      arc.seq.insert(arc.seq.end(), mid.begin(), mid.end());
      arc.seq.push_back(dst);
    }
    for (size_t i = 1; i + 1 < arc.seq.size(); ++i) used[static_cast<size_t>(arc.seq[i])] = 1;
    emb.arcs.push_back(std::move(arc));
  };

  // Radial arcs first (short), then circular arcs; later searches route
  // around the interiors already claimed, which keeps interiors disjoint.
  for (int a = 0; a + 1 < k; ++a)
    for (int b = 0; b < k; ++b) route(a, b, true);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b + 1 < k; ++b) route(a, b, false);
  return emb;
}

IsReduction gtleq_to_is(const GridTilingInstance& inst, const GridEmbedding& emb) {
  if (inst.mode != GridTilingInstance::leq)
    throw std::invalid_argument("independent-set reduction takes leq mode only");
  if (inst.k != emb.k) throw std::invalid_argument("grid side mismatch");
  IsReduction red;
  std::map<int, std::vector<int>> copies;  // Gamma vertex -> point ids
  auto add_point = [&](int site, std::pair<int, int> label) {
    int id = static_cast<int>(red.site.size());
    red.site.push_back(site);
    red.label.push_back(label);
    copies[site].push_back(id);
    return id;
  };
  int k = inst.k;
  red.target = k * k;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      auto cell = inst.sets[static_cast<size_t>(a)][static_cast<size_t>(b)];
      std::sort(cell.begin(), cell.end());
      for (const auto& w : cell)
        add_point(emb.grid[static_cast<size_t>(a)][static_cast<size_t>(b)], w);
    }
  for (const auto& arc : emb.arcs) {
    red.target += static_cast<int>(arc.seq.size()) - 2;
    for (size_t i = 1; i + 1 < arc.seq.size(); ++i)
      for (int idx = 1; idx <= inst.N; ++idx)
        add_point(arc.seq[i], arc.adir ? std::pair(idx, 1) : std::pair(1, idx));
  }
  int np = static_cast<int>(red.site.size());
  red.inst.rho = emb.rho;
  red.inst.nu = 1.0;
  red.inst.g = Graph(np);
  for (int p = 0; p < np; ++p)
    red.inst.points.push_back(emb.vertex_pos[static_cast<size_t>(red.site[static_cast<size_t>(p)])]);
  for (const auto& [site, ids] : copies)
    for (size_t i = 0; i < ids.size(); ++i)
      for (size_t j = i + 1; j < ids.size(); ++j) red.inst.g.add_edge(ids[i], ids[j]);
  // Along an arc, earlier copies connect to later ones exactly when the
  // controlled index strictly decreases, so independent choices are
  // non-decreasing chains.
  for (const auto& arc : emb.arcs)
    for (size_t i = 0; i + 1 < arc.seq.size(); ++i)
      for (int u : copies[arc.seq[i]])
        for (int v : copies[arc.seq[i + 1]]) {
          int cu = arc.adir ? red.label[static_cast<size_t>(u)].first
                            : red.label[static_cast<size_t>(u)].second;
          int cv = arc.adir ? red.label[static_cast<size_t>(v)].first
                            : red.label[static_cast<size_t>(v)].second;
          if (cu > cv) red.inst.g.add_edge(u, v);
        }
  return red;
}

}  // namespace hyp
