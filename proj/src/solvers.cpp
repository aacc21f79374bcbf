#include "hyp/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace hyp {
namespace {

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// ---------------------------------------------------------------------------
// Nice decomposition: a rooted chain/join normal form evaluated in index
// order (children always precede parents). Edge nodes are emitted once per
// graph edge, at the first node whose bag holds both endpoints.
// ---------------------------------------------------------------------------
struct NiceNode {
  enum Kind { leaf, intro, forget, join, edge } kind = leaf;
  int v = -1, u = -1;           // intro/forget vertex; edge endpoints (u < v)
  std::vector<int> bag;         // sorted
  int a = -1, b = -1;           // child indices
};

struct NiceTd {
  std::vector<NiceNode> nodes;  // topological: children before parents
  int root = -1;
};

class NiceBuilder {
 public:
  NiceBuilder(const TreeDecomposition& td, const Graph& g, bool with_edges)
      : td_(td), g_(g), with_edges_(with_edges) {}

  NiceTd build() {
    int root_idx = rec(0, -1);
    // forget the root bag down to the empty bag
    std::vector<int> bag = out_.nodes[root_idx].bag;
    while (!bag.empty()) {
      int v = bag.back();
      bag.pop_back();
      root_idx = push({NiceNode::forget, v, -1, bag, root_idx, -1});
    }
    out_.root = root_idx;
    return std::move(out_);
  }

 private:
  int push(NiceNode n) {
    out_.nodes.push_back(std::move(n));
    return static_cast<int>(out_.nodes.size()) - 1;
  }

  // introduce v on top of node idx (bag = old bag + v), then any not yet
  // emitted edges between v and the new bag
  int introduce(int idx, int v) {
    std::vector<int> bag = out_.nodes[idx].bag;
    bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
    idx = push({NiceNode::intro, v, -1, bag, idx, -1});
    if (!with_edges_) return idx;
    for (int u : bag) {
      if (u == v || !g_.has_edge(u, v)) continue;
      auto e = std::minmax(u, v);
      if (!emitted_.insert({e.first, e.second}).second) continue;
      idx = push({NiceNode::edge, e.second, e.first, bag, idx, -1});
    }
    return idx;
  }

  // subtree for td bag b; the returned node's bag equals td_.bags[b]
  int rec(int b, int parent) {
    std::vector<int> child_roots;
    for (int c : td_.tree.adj[b])
      if (c != parent) child_roots.push_back(rec(c, b));
    const std::vector<int>& target = td_.bags[b];
    std::vector<int> lifted;
    for (int idx : child_roots) {
      // forget what the child bag has beyond the target, then introduce the rest
      for (int v : out_.nodes[idx].bag) {
        if (std::binary_search(target.begin(), target.end(), v)) continue;
        std::vector<int> bag = out_.nodes[idx].bag;
        bag.erase(std::lower_bound(bag.begin(), bag.end(), v));
        idx = push({NiceNode::forget, v, -1, bag, idx, -1});
      }
      for (int v : target)
        if (!std::binary_search(out_.nodes[idx].bag.begin(), out_.nodes[idx].bag.end(), v))
          idx = introduce(idx, v);
      lifted.push_back(idx);
    }
    if (lifted.empty()) {
      int idx = push({NiceNode::leaf, -1, -1, {}, -1, -1});
      for (int v : target) idx = introduce(idx, v);
      return idx;
    }
    int idx = lifted[0];
    for (size_t i = 1; i < lifted.size(); i++)
      idx = push({NiceNode::join, -1, -1, target, idx, lifted[i]});
    return idx;
  }

  const TreeDecomposition& td_;
  const Graph& g_;
  bool with_edges_;
  std::set<std::pair<int, int>> emitted_;
  NiceTd out_;
};

NiceTd make_nice(const TreeDecomposition& td, const Graph& g, bool with_edges) {
  return NiceBuilder(td, g, with_edges).build();
}

// ---------------------------------------------------------------------------
// Independent set DP: states are the selected subsets of the bag.
// ---------------------------------------------------------------------------
struct OptEntry {
  int val = 0;
  std::vector<int> wit;  // sorted
};

// prefer higher value, then the lexicographically smaller witness
bool better_max(const OptEntry& cand, const OptEntry& cur) {
  if (cand.val != cur.val) return cand.val > cur.val;
  return std::lexicographical_compare(cand.wit.begin(), cand.wit.end(), cur.wit.begin(),
                                      cur.wit.end());
}

bool better_min(const OptEntry& cand, const OptEntry& cur) {
  if (cand.val != cur.val) return cand.val < cur.val;
  return std::lexicographical_compare(cand.wit.begin(), cand.wit.end(), cur.wit.begin(),
                                      cur.wit.end());
}

using OptTable = std::map<std::vector<int>, OptEntry>;

void table_insert(OptTable& t, std::vector<int> key, OptEntry e,
                  bool (*pref)(const OptEntry&, const OptEntry&)) {
  auto it = t.find(key);
  if (it == t.end())
    t.emplace(std::move(key), std::move(e));
  else if (pref(e, it->second))
    it->second = std::move(e);
}

void check_budget(const OptTable& t, const DPBudget& budget, const char* who) {
  if (static_cast<long long>(t.size()) > budget.max_states)
    throw BudgetError(std::string(who) + ": state budget exceeded");
}

SolveResult run_is_dp(const Graph& g, const TreeDecomposition& td, const Partition& part,
                      const DPBudget& budget) {
  NiceTd nt = make_nice(td, g, false);
  std::vector<OptTable> tables(nt.nodes.size());
  SolveResult res;
  for (size_t i = 0; i < nt.nodes.size(); i++) {
    const NiceNode& nd = nt.nodes[i];
    OptTable& t = tables[i];
    switch (nd.kind) {
      case NiceNode::leaf:
        t[{}] = {0, {}};
        break;
      case NiceNode::intro: {
        for (auto& [s, e] : tables[nd.a]) {
          table_insert(t, s, e, better_max);
          bool ok = true;
          for (int u : s)
            if (g.has_edge(u, nd.v)) { ok = false; break; }
          if (ok && budget.kappa > 0) {
            int cls = part.class_of[nd.v], cnt = 1;
            for (int u : s) cnt += part.class_of[u] == cls;
            ok = cnt <= budget.kappa;
          }
          if (ok) {
            std::vector<int> s2 = s;
            s2.insert(std::lower_bound(s2.begin(), s2.end(), nd.v), nd.v);
            std::vector<int> w2 = e.wit;
            w2.insert(std::lower_bound(w2.begin(), w2.end(), nd.v), nd.v);
            table_insert(t, std::move(s2), {e.val + 1, std::move(w2)}, better_max);
          }
        }
        break;
      }
      case NiceNode::forget: {
        for (auto& [s, e] : tables[nd.a]) {
          std::vector<int> s2 = s;
          auto it = std::lower_bound(s2.begin(), s2.end(), nd.v);
          if (it != s2.end() && *it == nd.v) s2.erase(it);
          table_insert(t, std::move(s2), e, better_max);
        }
        break;
      }
      case NiceNode::join: {
        for (auto& [s, ea] : tables[nd.a]) {
          auto it = tables[nd.b].find(s);
          if (it == tables[nd.b].end()) continue;
          OptEntry e{ea.val + it->second.val - static_cast<int>(s.size()),
                     sorted_union(ea.wit, it->second.wit)};
          table_insert(t, s, std::move(e), better_max);
        }
        break;
      }
      case NiceNode::edge:
        break;  // not used in this DP
    }
    check_budget(t, budget, "solve_is");
    res.node_bags.push_back(nd.bag);
    res.node_states.push_back(static_cast<long long>(t.size()));
    res.max_bag_states = std::max(res.max_bag_states, static_cast<long long>(t.size()));
    if (nd.kind == NiceNode::join) tables[nd.b].clear();
    if (nd.kind != NiceNode::leaf) tables[nd.a].clear();
  }
  const OptEntry& top = tables[nt.root].at({});
  res.size = top.val;
  res.witness = top.wit;
  return res;
}

void require_valid(const Graph& g, const TreeDecomposition& td, const char* who) {
  TdReport rep = validate_td(g, td);
  if (!rep.valid) throw std::invalid_argument(std::string(who) + ": " + rep.violation);
}

// ---------------------------------------------------------------------------
// Dominating set DP: per bag vertex a status in {0 = not yet dominated,
// 1 = dominated, 2 = selected}. Statuses are kept normalized: a vertex with a
// selected bag neighbor is never left at 0 (flipping it to 1 only widens the
// completions, so the 0 variant is dominated and dropped).
// ---------------------------------------------------------------------------
SolveResult run_ds_dp(const Graph& g, const TreeDecomposition& td, const Partition& part,
                      const DPBudget& budget) {
  NiceTd nt = make_nice(td, g, false);
  std::vector<OptTable> tables(nt.nodes.size());
  SolveResult res;
  auto pos_of = [](const std::vector<int>& bag, int v) {
    return static_cast<int>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
  };
  for (size_t i = 0; i < nt.nodes.size(); i++) {
    const NiceNode& nd = nt.nodes[i];
    OptTable& t = tables[i];
    switch (nd.kind) {
      case NiceNode::leaf:
        t[{}] = {0, {}};
        break;
      case NiceNode::intro: {
        const std::vector<int>& bag = nd.bag;
        int p = pos_of(bag, nd.v);
        for (auto& [s, e] : tables[nd.a]) {
          // option 1: v not selected; dominated iff a selected bag neighbor
          std::vector<int> s1 = s;
          bool dom = false;
          for (int j = 0; j < static_cast<int>(s.size()); j++) {
            int u = j < p ? bag[j] : bag[j + 1];
            if (s[j] == 2 && g.has_edge(u, nd.v)) { dom = true; break; }
          }
          s1.insert(s1.begin() + p, dom ? 1 : 0);
          table_insert(t, std::move(s1), e, better_min);
          // option 2: v selected (respecting the per-class cap)
          bool ok = true;
          if (budget.kappa > 0) {
            int cls = part.class_of[nd.v], cnt = 1;
            for (int j = 0; j < static_cast<int>(s.size()); j++) {
              int u = j < p ? bag[j] : bag[j + 1];
              if (s[j] == 2) cnt += part.class_of[u] == cls;
            }
            ok = cnt <= budget.kappa;
          }
          if (ok) {
            std::vector<int> s2 = s;
            s2.insert(s2.begin() + p, 2);
            for (int j = 0; j < static_cast<int>(s2.size()); j++)
              if (j != p && s2[j] == 0 && g.has_edge(bag[j], nd.v)) s2[j] = 1;
            std::vector<int> w2 = e.wit;
            w2.insert(std::lower_bound(w2.begin(), w2.end(), nd.v), nd.v);
            table_insert(t, std::move(s2), {e.val + 1, std::move(w2)}, better_min);
          }
        }
        break;
      }
      case NiceNode::forget: {
        const std::vector<int>& cbag = nt.nodes[nd.a].bag;
        int p = pos_of(cbag, nd.v);
        for (auto& [s, e] : tables[nd.a]) {
          if (s[p] == 0) continue;  // forgotten vertices must be dominated
          std::vector<int> s2 = s;
          s2.erase(s2.begin() + p);
          table_insert(t, std::move(s2), e, better_min);
        }
        break;
      }
      case NiceNode::join: {
        // group the right child by its selected-position pattern
        std::map<std::vector<int>, std::vector<const std::pair<const std::vector<int>, OptEntry>*>>
            by_sel;
        for (auto& kv : tables[nd.b]) {
          std::vector<int> sel(kv.first.size());
          for (size_t j = 0; j < kv.first.size(); j++) sel[j] = kv.first[j] == 2;
          by_sel[sel].push_back(&kv);
        }
        for (auto& [sa, ea] : tables[nd.a]) {
          std::vector<int> sel(sa.size());
          int picked = 0;
          for (size_t j = 0; j < sa.size(); j++) {
            sel[j] = sa[j] == 2;
            picked += sel[j];
          }
          auto it = by_sel.find(sel);
          if (it == by_sel.end()) continue;
          for (auto* kv : it->second) {
            std::vector<int> s(sa.size());
            for (size_t j = 0; j < sa.size(); j++) s[j] = std::max(sa[j], kv->first[j]);
            OptEntry e{ea.val + kv->second.val - picked, sorted_union(ea.wit, kv->second.wit)};
            table_insert(t, std::move(s), std::move(e), better_min);
          }
        }
        break;
      }
      case NiceNode::edge:
        break;
    }
    check_budget(t, budget, "solve_ds");
    res.node_bags.push_back(nd.bag);
    res.node_states.push_back(static_cast<long long>(t.size()));
    res.max_bag_states = std::max(res.max_bag_states, static_cast<long long>(t.size()));
    if (nd.kind == NiceNode::join) tables[nd.b].clear();
    if (nd.kind != NiceNode::leaf) tables[nd.a].clear();
  }
  const OptEntry& top = tables[nt.root].at({});
  res.size = top.val;
  res.witness = top.wit;
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public solvers
// ---------------------------------------------------------------------------
SolveResult solve_is(const Graph& g, const WeightedTreeDecomposition& wtd, const Partition& part,
                     const DPBudget& budget) {
  TreeDecomposition td = expand_weighted(wtd, part);
  require_valid(g, td, "solve_is");
  return run_is_dp(g, td, part, budget);
}

SolveResult solve_vc(const Graph& g, const WeightedTreeDecomposition& wtd, const Partition& part,
                     const DPBudget& budget) {
  SolveResult is = solve_is(g, wtd, part, budget);
  SolveResult res;
  res.max_bag_states = is.max_bag_states;
  res.node_bags = std::move(is.node_bags);
  res.node_states = std::move(is.node_states);
  res.size = g.n - is.size;
  for (int v = 0; v < g.n; v++)
    if (!std::binary_search(is.witness.begin(), is.witness.end(), v)) res.witness.push_back(v);
  return res;
}

SolveResult solve_ds(const Graph& g, const WeightedTreeDecomposition& wtd, const Partition& part,
                     const DPBudget& budget) {
  TreeDecomposition td = expand_weighted(wtd, part);
  require_valid(g, td, "solve_ds");
  return run_ds_dp(g, td, part, budget);
}

std::optional<std::vector<int>> solve_qcoloring(const Graph& g, int q, const Partition& part,
                                                const DPBudget& budget) {
  if (q < 1) throw std::invalid_argument("solve_qcoloring: q must be positive");
  for (const auto& cls : part.classes) {
    size_t cap = kappa_cover(g, cls).size() * static_cast<size_t>(q);
    if (cls.size() > cap) return std::nullopt;  // some clique of the cover needs q+1 colors
  }
  if (g.n == 0) return std::vector<int>{};
  TreeDecomposition td = heuristic_decompose(g);
  NiceTd nt = make_nice(td, g, false);
  // state: one color per bag position; entry witness: (vertex, color) pairs
  using Table = std::map<std::vector<int>, std::vector<std::pair<int, int>>>;
  std::vector<Table> tables(nt.nodes.size());
  auto pos_of = [](const std::vector<int>& bag, int v) {
    return static_cast<int>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
  };
  for (size_t i = 0; i < nt.nodes.size(); i++) {
    const NiceNode& nd = nt.nodes[i];
    Table& t = tables[i];
    switch (nd.kind) {
      case NiceNode::leaf:
        t[{}] = {};
        break;
      case NiceNode::intro: {
        int p = pos_of(nd.bag, nd.v);
        for (auto& [s, w] : tables[nd.a]) {
          for (int c = 0; c < q; c++) {
            bool ok = true;
            for (size_t j = 0; j < s.size() && ok; j++) {
              int u = static_cast<int>(j) < p ? nd.bag[j] : nd.bag[j + 1];
              if (s[j] == c && g.has_edge(u, nd.v)) ok = false;
            }
            if (!ok) continue;
            std::vector<int> s2 = s;
            s2.insert(s2.begin() + p, c);
            auto w2 = w;
            w2.emplace_back(nd.v, c);
            t.emplace(std::move(s2), std::move(w2));  // keep-first is deterministic
          }
        }
        break;
      }
      case NiceNode::forget: {
        int p = pos_of(nt.nodes[nd.a].bag, nd.v);
        for (auto& [s, w] : tables[nd.a]) {
          std::vector<int> s2 = s;
          s2.erase(s2.begin() + p);
          t.emplace(std::move(s2), w);
        }
        break;
      }
      case NiceNode::join: {
        for (auto& [s, wa] : tables[nd.a]) {
          auto it = tables[nd.b].find(s);
          if (it == tables[nd.b].end()) continue;
          auto w = wa;
          w.insert(w.end(), it->second.begin(), it->second.end());
          t.emplace(s, std::move(w));
        }
        break;
      }
      case NiceNode::edge:
        break;
    }
    if (static_cast<long long>(t.size()) > budget.max_states)
      throw BudgetError("solve_qcoloring: state budget exceeded");
    if (nd.kind == NiceNode::join) tables[nd.b].clear();
    if (nd.kind != NiceNode::leaf) tables[nd.a].clear();
  }
  const Table& top = tables[nt.root];
  if (top.empty()) return std::nullopt;
  std::vector<int> colors(g.n, 0);
  for (auto& [v, c] : top.begin()->second) colors[v] = c;
  return colors;
}

// ---------------------------------------------------------------------------
// Hamiltonian cycle
// ---------------------------------------------------------------------------
namespace {

// maximum bipartite matching size via augmenting paths; edges between the
// (deduplicated) left/right endpoint lists
std::vector<std::pair<int, int>> max_matching(const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> left, right;
  for (auto& [u, v] : edges) { left.push_back(u); right.push_back(v); }
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  std::sort(right.begin(), right.end());
  right.erase(std::unique(right.begin(), right.end()), right.end());
  auto idx = [](const std::vector<int>& xs, int x) {
    return static_cast<int>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
  };
  std::vector<std::vector<int>> adj(left.size());
  for (auto& [u, v] : edges) adj[idx(left, u)].push_back(idx(right, v));
  std::vector<int> match_r(right.size(), -1), match_l(left.size(), -1);
  std::vector<char> seen;
  std::function<bool(int)> aug = [&](int l) {
    for (int r : adj[l]) {
      if (seen[r]) continue;
      seen[r] = 1;
      if (match_r[r] < 0 || aug(match_r[r])) {
        match_r[r] = l;
        match_l[l] = r;
        return true;
      }
    }
    return false;
  };
  for (size_t l = 0; l < left.size(); l++) {
    seen.assign(right.size(), 0);
    aug(static_cast<int>(l));
  }
  std::vector<std::pair<int, int>> out;
  for (size_t l = 0; l < left.size(); l++)
    if (match_l[l] >= 0) out.emplace_back(left[l], right[match_l[l]]);
  return out;
}

// path-system state for the HC DP: deg in {0,1,2} per bag position, mate =
// partner position of each path endpoint, closed once the cycle is complete
struct HcState {
  std::vector<signed char> deg;
  std::vector<signed char> mate;  // -1 when deg != 1
  bool closed = false;

  std::vector<int> key() const {
    std::vector<int> k;
    k.reserve(deg.size() * 2 + 1);
    for (auto d : deg) k.push_back(d);
    for (auto m : mate) k.push_back(m);
    k.push_back(closed);
    return k;
  }
};

using HcTable = std::map<std::vector<int>, std::pair<HcState, std::vector<std::pair<int, int>>>>;

void hc_insert(HcTable& t, HcState st, std::vector<std::pair<int, int>> wit) {
  std::vector<int> k = st.key();  // sequenced before the moves below
  t.emplace(std::move(k), std::make_pair(std::move(st), std::move(wit)));  // keep-first
}

// nullopt when the two path systems would close a premature cycle
std::optional<HcState> hc_join(const HcState& a, const HcState& b) {
  if (a.closed && b.closed) return std::nullopt;
  size_t m = a.deg.size();
  HcState r;
  r.deg.resize(m);
  r.mate.assign(m, -1);
  r.closed = a.closed || b.closed;
  for (size_t j = 0; j < m; j++) {
    int d = a.deg[j] + b.deg[j];
    if (d > 2) return std::nullopt;
    if (r.closed && (a.closed ? b.deg[j] : a.deg[j]) != 0) return std::nullopt;
    r.deg[j] = static_cast<signed char>(d);
  }
  if (r.closed) {
    for (size_t j = 0; j < m; j++) r.mate[j] = a.closed ? a.mate[j] : b.mate[j];
    return r;
  }
  // merge the two path systems; each deg-1-in-both position is interior
  int cycles = 0;
  std::vector<char> done(m, 0);
  for (size_t s = 0; s < m; s++) {
    if (done[s] || r.deg[s] == 0 || (a.deg[s] == 2 || b.deg[s] == 2)) continue;
    bool end = (a.deg[s] == 1) != (b.deg[s] == 1);
    if (!end) continue;  // interior in the merged system; handled along walks
    // walk from this free end, alternating between the two systems
    int cur = static_cast<int>(s);
    bool use_a = a.deg[s] == 1;
    done[cur] = 1;
    while (true) {
      int nxt = use_a ? a.mate[cur] : b.mate[cur];
      done[nxt] = 1;
      bool other_has = (use_a ? b.deg[nxt] : a.deg[nxt]) == 1;
      if (!other_has) {
        r.mate[s] = static_cast<signed char>(nxt);
        r.mate[nxt] = static_cast<signed char>(s);
        break;
      }
      cur = nxt;
      use_a = !use_a;
    }
  }
  // whatever deg-1/1 positions remain untouched lie on alternating cycles
  for (size_t j = 0; j < m; j++) {
    if (done[j] || !(a.deg[j] == 1 && b.deg[j] == 1)) continue;
    cycles++;
    int cur = static_cast<int>(j);
    bool use_a = true;
    do {
      done[cur] = 1;
      cur = use_a ? a.mate[cur] : b.mate[cur];
      use_a = !use_a;
    } while (cur != static_cast<int>(j));
  }
  if (cycles > 0) {
    // a closed loop is only the Hamiltonian cycle itself: it must be alone
    if (cycles > 1) return std::nullopt;
    for (size_t j = 0; j < m; j++)
      if (r.deg[j] == 1) return std::nullopt;
    r.closed = true;
  }
  return r;
}

std::optional<std::vector<std::pair<int, int>>> run_hc_dp(const Graph& g,
                                                          const TreeDecomposition& td,
                                                          const DPBudget& budget) {
  NiceTd nt = make_nice(td, g, true);
  std::vector<HcTable> tables(nt.nodes.size());
  auto pos_of = [](const std::vector<int>& bag, int v) {
    return static_cast<int>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
  };
  for (size_t i = 0; i < nt.nodes.size(); i++) {
    const NiceNode& nd = nt.nodes[i];
    HcTable& t = tables[i];
    switch (nd.kind) {
      case NiceNode::leaf:
        hc_insert(t, HcState{}, {});
        break;
      case NiceNode::intro: {
        int p = pos_of(nd.bag, nd.v);
        for (auto& [k, sw] : tables[nd.a]) {
          HcState st = sw.first;
          st.deg.insert(st.deg.begin() + p, 0);
          st.mate.insert(st.mate.begin() + p, -1);
          for (auto& m : st.mate)
            if (m >= p) m++;
          hc_insert(t, std::move(st), sw.second);
        }
        break;
      }
      case NiceNode::edge: {
        int pu = pos_of(nd.bag, nd.u), pv = pos_of(nd.bag, nd.v);
        for (auto& [k, sw] : tables[nd.a]) {
          hc_insert(t, sw.first, sw.second);  // skip the edge
          const HcState& s = sw.first;
          if (s.closed || s.deg[pu] == 2 || s.deg[pv] == 2) continue;
          HcState st = s;
          auto wit = sw.second;
          wit.emplace_back(nd.u, nd.v);
          if (s.deg[pu] == 0 && s.deg[pv] == 0) {
            st.deg[pu] = st.deg[pv] = 1;
            st.mate[pu] = static_cast<signed char>(pv);
            st.mate[pv] = static_cast<signed char>(pu);
          } else if (s.deg[pu] == 1 && s.deg[pv] == 1) {
            if (s.mate[pu] == pv) {
              // closing the cycle: no other open path may remain
              bool lone = true;
              for (size_t j = 0; j < s.deg.size(); j++)
                if (static_cast<int>(j) != pu && static_cast<int>(j) != pv && s.deg[j] == 1)
                  lone = false;
              if (!lone) continue;
              st.closed = true;
            } else {
              int mu = s.mate[pu], mv = s.mate[pv];
              st.mate[mu] = static_cast<signed char>(mv);
              st.mate[mv] = static_cast<signed char>(mu);
            }
            st.deg[pu] = st.deg[pv] = 2;
            st.mate[pu] = st.mate[pv] = -1;
          } else {
            int p1 = s.deg[pu] == 1 ? pu : pv;  // path end
            int p0 = p1 == pu ? pv : pu;        // fresh vertex
            int m1 = s.mate[p1];
            st.mate[m1] = static_cast<signed char>(p0);
            st.mate[p0] = static_cast<signed char>(m1);
            st.deg[p1] = 2;
            st.deg[p0] = 1;
            st.mate[p1] = -1;
          }
          hc_insert(t, std::move(st), std::move(wit));
        }
        break;
      }
      case NiceNode::forget: {
        int p = pos_of(nt.nodes[nd.a].bag, nd.v);
        for (auto& [k, sw] : tables[nd.a]) {
          if (sw.first.deg[p] != 2) continue;  // every vertex must sit on the cycle
          HcState st = sw.first;
          st.deg.erase(st.deg.begin() + p);
          st.mate.erase(st.mate.begin() + p);
          for (auto& m : st.mate)
            if (m > p) m--;
          hc_insert(t, std::move(st), sw.second);
        }
        break;
      }
      case NiceNode::join: {
        for (auto& [ka, swa] : tables[nd.a])
          for (auto& [kb, swb] : tables[nd.b]) {
            auto merged = hc_join(swa.first, swb.first);
            if (!merged) continue;
            auto wit = swa.second;
            wit.insert(wit.end(), swb.second.begin(), swb.second.end());
            hc_insert(t, std::move(*merged), std::move(wit));
          }
        break;
      }
    }
    if (static_cast<long long>(t.size()) > budget.max_states)
      throw BudgetError("solve_hamiltonian: state budget exceeded");
    if (nd.kind == NiceNode::join) tables[nd.b].clear();
    if (nd.kind != NiceNode::leaf) tables[nd.a].clear();
  }
  for (auto& [k, sw] : tables[nt.root])
    if (sw.first.closed) return sw.second;
  return std::nullopt;
}

std::vector<int> cycle_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> order;
  int prev = -1, cur = 0;
  do {
    order.push_back(cur);
    int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = nxt;
  } while (cur != 0);
  return order;
}

}  // namespace

PrunedGraph prune_hamiltonian(const Graph& g, const Partition& part) {
  PrunedGraph out;
  out.vertices.resize(g.n);
  std::iota(out.vertices.begin(), out.vertices.end(), 0);
  out.g = g;
  std::vector<int> comp = components(g);
  if (g.n < 3 || *std::max_element(comp.begin(), comp.end()) > 0) {
    out.feasible = false;
    return out;
  }
  if (part.classes.size() <= 1) return out;  // a single clique: nothing to prune

  QuotientGraph q = contract(g, part);
  int delta = 0;
  for (int c = 0; c < q.g.n; c++) delta = std::max(delta, q.g.degree(c));
  size_t cap = 2 * static_cast<size_t>(delta) * delta + 2;

  // G1: all intra-class edges plus a bounded matching-preserving cross subset
  std::vector<char> has_cross(g.n, 0);
  for (auto [a, b] : q.g.edges()) {
    std::vector<std::pair<int, int>> cross;
    for (int u : part.classes[a])
      for (int v : g.adj[u])
        if (part.class_of[v] == b) cross.emplace_back(u, v);
    std::vector<std::pair<int, int>> kept;
    if (cross.size() <= cap) {
      kept = cross;
    } else {
      kept = max_matching(cross);
      if (kept.size() > cap) kept.resize(cap);  // the cap wins over the matching
      std::set<std::pair<int, int>> in_kept(kept.begin(), kept.end());
      // fill greedily with the highest-degree remaining cross edges
      std::sort(cross.begin(), cross.end(), [&](auto& x, auto& y) {
        int dx = g.degree(x.first) + g.degree(x.second);
        int dy = g.degree(y.first) + g.degree(y.second);
        return dx != dy ? dx > dy : x < y;
      });
      for (auto& e : cross) {
        if (kept.size() >= cap) break;
        if (in_kept.insert(e).second) kept.push_back(e);
      }
    }
    for (auto& [u, v] : kept) has_cross[u] = has_cross[v] = 1;
  }

  // G2/G3: drop clique vertices with no kept cross edge, then take the
  // induced subgraph of the input on what remains
  out.vertices.clear();
  for (int v = 0; v < g.n; v++)
    if (has_cross[v]) out.vertices.push_back(v);
  out.g = induced_subgraph(g, out.vertices);
  std::vector<int> comp3 = components(out.g);
  if (out.g.n < 3 ||
      (out.g.n > 0 && *std::max_element(comp3.begin(), comp3.end()) > 0))
    out.feasible = false;
  return out;
}

std::optional<std::vector<int>> solve_hamiltonian(const Graph& g, const Partition& part,
                                                  const DPBudget& budget) {
  if (g.n < 3) return std::nullopt;
  for (int v = 0; v < g.n; v++)
    if (g.degree(v) < 2) return std::nullopt;
  PrunedGraph pr = prune_hamiltonian(g, part);
  if (!pr.feasible) return std::nullopt;
  TreeDecomposition td = heuristic_decompose(pr.g);
  auto edges = run_hc_dp(pr.g, td, budget);
  if (!edges) return std::nullopt;
  std::vector<int> order = cycle_from_edges(pr.g.n, *edges);
  for (int& v : order) v = pr.vertices[v];
  if (static_cast<int>(pr.vertices.size()) < g.n) {
    // reinsert the pruned vertices of a class after a cycle vertex of that
    // class: the detour runs through clique edges, and its last vertex must
    // have an original edge back to the cycle; if no slot works, fall back to
    // the DP on the unpruned graph
    std::vector<std::vector<int>> removed(part.classes.size());
    std::vector<char> kept(g.n, 0);
    for (int v : pr.vertices) kept[v] = 1;
    for (int v = 0; v < g.n; v++)
      if (!kept[v]) removed[part.class_of[v]].push_back(v);
    std::vector<int> lifted;
    int m = static_cast<int>(order.size());
    for (int j = 0; j < m; j++) {
      lifted.push_back(order[j]);
      int c = part.class_of[order[j]];
      if (removed[c].empty()) continue;
      int next = order[(j + 1) % m];
      auto tail = std::find_if(removed[c].begin(), removed[c].end(),
                               [&](int r) { return g.has_edge(r, next); });
      if (tail == removed[c].end()) continue;
      int last = *tail;
      removed[c].erase(tail);
      lifted.insert(lifted.end(), removed[c].begin(), removed[c].end());
      lifted.push_back(last);
      removed[c].clear();
    }
    bool ok = true;
    for (auto& r : removed)
      if (!r.empty()) ok = false;
    if (ok) {
      order = lifted;
    } else {
      TreeDecomposition full = heuristic_decompose(g);
      auto full_edges = run_hc_dp(g, full, budget);
      if (!full_edges) return std::nullopt;  // pruning disagreed; trust the full graph
      order = cycle_from_edges(g.n, *full_edges);
    }
  }
  if (!is_hamiltonian_cycle(g, order))
    throw std::logic_error("solve_hamiltonian: produced an invalid cycle");
  return order;
}

// ---------------------------------------------------------------------------
// Brute-force oracles
// ---------------------------------------------------------------------------
namespace {

std::vector<uint32_t> adjacency_masks(const Graph& g) {
  std::vector<uint32_t> bm(g.n, 0);
  for (int u = 0; u < g.n; u++)
    for (int v : g.adj[u]) bm[u] |= 1u << v;
  return bm;
}

int brute_is(const Graph& g) {
  auto bm = adjacency_masks(g);
  int best = 0;
  std::vector<char> indep(size_t(1) << g.n, 0);
  indep[0] = 1;
  for (uint32_t mask = 1; mask < (1u << g.n); mask++) {
    int v = std::countr_zero(mask);
    uint32_t rest = mask & (mask - 1);
    indep[mask] = indep[rest] && (bm[v] & rest) == 0;
    if (indep[mask]) best = std::max(best, std::popcount(mask));
  }
  return best;
}

int brute_ds(const Graph& g) {
  auto bm = adjacency_masks(g);
  uint32_t full = g.n == 32 ? ~0u : (1u << g.n) - 1;
  int best = g.n;
  std::vector<uint32_t> dom(size_t(1) << g.n, 0);
  for (uint32_t mask = 1; mask <= full; mask++) {
    int v = std::countr_zero(mask);
    dom[mask] = dom[mask & (mask - 1)] | bm[v] | (1u << v);
    if (dom[mask] == full) best = std::min(best, std::popcount(mask));
  }
  return best;
}

bool brute_qcol(const Graph& g, int q, int v, std::vector<int>& col) {
  if (v == g.n) return true;
  int limit = std::min(q, v + 1);  // symmetry: first use of a color is canonical
  for (int c = 0; c < limit; c++) {
    bool ok = true;
    for (int u : g.adj[v])
      if (u < v && col[u] == c) { ok = false; break; }
    if (!ok) continue;
    col[v] = c;
    if (brute_qcol(g, q, v + 1, col)) return true;
  }
  return false;
}

int brute_hc(const Graph& g) {
  if (g.n < 3) return 0;
  auto bm = adjacency_masks(g);
  int n = g.n;
  std::vector<std::vector<char>> dp(size_t(1) << n, std::vector<char>(n, 0));
  dp[1][0] = 1;
  for (uint32_t mask = 1; mask < (1u << n); mask++) {
    if (!(mask & 1)) continue;
    for (int v = 0; v < n; v++) {
      if (!dp[mask][v]) continue;
      uint32_t cand = bm[v] & ~mask;
      while (cand) {
        int u = std::countr_zero(cand);
        cand &= cand - 1;
        dp[mask | (1u << u)][u] = 1;
      }
    }
  }
  uint32_t full = (1u << n) - 1;
  for (int v = 1; v < n; v++)
    if (dp[full][v] && (bm[v] & 1u)) return 1;
  return 0;
}

}  // namespace

int brute_force(Problem p, const Graph& g, int q) {
  int cap = p == Problem::hc ? 16 : 20;
  if (g.n > cap) throw std::invalid_argument("brute_force: graph too large");
  switch (p) {
    case Problem::is:
      return brute_is(g);
    case Problem::vc:
      return g.n - brute_is(g);
    case Problem::ds:
      return g.n == 0 ? 0 : brute_ds(g);
    case Problem::qcol: {
      if (q < 1) throw std::invalid_argument("brute_force: q must be positive");
      std::vector<int> col(g.n, -1);
      return brute_qcol(g, q, 0, col) ? 1 : 0;
    }
    case Problem::hc:
      return brute_hc(g);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Witness predicates
// ---------------------------------------------------------------------------
bool is_independent_set(const Graph& g, const std::vector<int>& vs) {
  for (size_t i = 0; i < vs.size(); i++)
    for (size_t j = i + 1; j < vs.size(); j++)
      if (vs[i] == vs[j] || g.has_edge(vs[i], vs[j])) return false;
  return true;
}

bool is_vertex_cover(const Graph& g, const std::vector<int>& vs) {
  std::vector<char> in(g.n, 0);
  for (int v : vs) in[v] = 1;
  for (auto [u, v] : g.edges())
    if (!in[u] && !in[v]) return false;
  return true;
}

bool is_dominating_set(const Graph& g, const std::vector<int>& vs) {
  std::vector<char> dom(g.n, 0);
  for (int v : vs) {
    dom[v] = 1;
    for (int u : g.adj[v]) dom[u] = 1;
  }
  for (int v = 0; v < g.n; v++)
    if (!dom[v]) return false;
  return true;
}

bool is_proper_coloring(const Graph& g, const std::vector<int>& colors, int q) {
  if (static_cast<int>(colors.size()) != g.n) return false;
  for (int v = 0; v < g.n; v++)
    if (colors[v] < 0 || colors[v] >= q) return false;
  for (auto [u, v] : g.edges())
    if (colors[u] == colors[v]) return false;
  return true;
}

bool is_hamiltonian_cycle(const Graph& g, const std::vector<int>& order) {
  int n = g.n;
  if (n < 3 || static_cast<int>(order.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : order) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  for (int i = 0; i < n; i++)
    if (!g.has_edge(order[i], order[(i + 1) % n])) return false;
  return true;
}

}  // namespace hyp
