#include "hyp/separator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

namespace hyp {

namespace {

using P2 = std::array<double, 2>;

// Sutherland-Hodgman clip of a convex polygon against u.x >= t.
std::vector<P2> clip_halfplane(const std::vector<P2>& poly, const P2& u, double t) {
  std::vector<P2> out;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % n];
    double fa = u[0] * a[0] + u[1] * a[1] - t;
    double fb = u[0] * b[0] + u[1] * b[1] - t;
    if (fa >= -1e-12) out.push_back(a);
    if ((fa > 1e-12 && fb < -1e-12) || (fa < -1e-12 && fb > 1e-12)) {
      double w = fa / (fa - fb);
      out.push_back({a[0] + w * (b[0] - a[0]), a[1] + w * (b[1] - a[1])});
    }
  }
  return out;
}

P2 polygon_centroid(const std::vector<P2>& poly) {
  double area2 = 0.0, cx = 0.0, cy = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % n];
    double cross = a[0] * b[1] - b[0] * a[1];
    area2 += cross;
    cx += (a[0] + b[0]) * cross;
    cy += (a[1] + b[1]) * cross;
  }
  if (std::abs(area2) < 1e-300) {
    // Degenerate region: plain vertex average.
    for (const P2& a : poly) cx += a[0], cy += a[1];
    return {cx / n, cy / n};
  }
  return {cx / (3.0 * area2), cy / (3.0 * area2)};
}

HPoint exact2d_centerpoint(const std::vector<HPoint>& points) {
  const int n = static_cast<int>(points.size());
  std::vector<P2> pts(n);
  for (int i = 0; i < n; ++i) {
    Vec k = convert(points[i], Model::klein);
    pts[i] = {k[0], k[1]};
  }
  const int m = (2 * n + 2) / 3;  // ceil(2n/3)
  std::vector<P2> poly{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  if (m + 1 <= n) {
    // Constraint u.c >= (m+1)-th largest projection, at every critical
    // direction (perpendicular to a point difference) and both orientations.
    // Between critical directions the active order statistic is a fixed
    // point's projection, and a sinusoid nonnegative at two angles less than
    // a half-turn apart is nonnegative between them, so these suffice.
    std::vector<P2> dirs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1];
        double len = std::hypot(dx, dy);
        if (len < 1e-14) continue;
        dirs.push_back({-dy / len, dx / len});
        dirs.push_back({dy / len, -dx / len});
      }
    dirs.push_back({1, 0});
    dirs.push_back({-1, 0});
    dirs.push_back({0, 1});
    dirs.push_back({0, -1});
    std::vector<double> proj(n);
    for (const P2& u : dirs) {
      for (int i = 0; i < n; ++i) proj[i] = u[0] * pts[i][0] + u[1] * pts[i][1];
      std::nth_element(proj.begin(), proj.begin() + m, proj.end(), std::greater<>());
      poly = clip_halfplane(poly, u, proj[m]);
      if (poly.empty()) throw PrecisionError("centerpoint region collapsed");
    }
  }
  P2 c = polygon_centroid(poly);
  return from_model(Model::klein, {c[0], c[1]});
}

// Nontrivial lambda with sum(lambda_i x_i) = 0 and sum(lambda_i) = 0: null
// vector of the (d+1) x (d+2) matrix of lifted points.
std::vector<double> affine_dependence(const std::vector<Vec>& x, int d) {
  const int rows = d + 1, cols = d + 2;
  std::vector<std::vector<double>> a(rows, std::vector<double>(cols));
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < d; ++i) a[i][j] = x[j][i];
    a[d][j] = 1.0;
  }
  std::vector<int> pivot_col(rows, -1);
  std::vector<char> used(cols, 0);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = r;
    for (int i = r + 1; i < rows; ++i)
      if (std::abs(a[i][c]) > std::abs(a[best][c])) best = i;
    if (std::abs(a[best][c]) < 1e-12) continue;
    std::swap(a[best], a[r]);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      double f = a[i][c] / a[r][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col[r] = c;
    used[c] = 1;
    ++r;
  }
  int free_col = -1;
  for (int c = 0; c < cols; ++c)
    if (!used[c]) free_col = c;
  std::vector<double> lam(cols, 0.0);
  if (free_col < 0) return lam;  // should not happen: rank <= d+1 < d+2
  lam[free_col] = 1.0;
  for (int i = r - 1; i >= 0; --i) {
    int c = pivot_col[i];
    double s = 0.0;
    for (int j = 0; j < cols; ++j)
      if (j != c) s += a[i][j] * lam[j];
    lam[c] = -s / a[i][c];
  }
  return lam;
}

Vec radon_point(const std::vector<Vec>& x, int d) {
  std::vector<double> lam = affine_dependence(x, d);
  Vec num(d, 0.0);
  double den = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (lam[i] <= 0) continue;
    den += lam[i];
    for (int k = 0; k < d; ++k) num[k] += lam[i] * x[i][k];
  }
  if (den < 1e-12) return x[0];  // fully degenerate sample
  for (double& v : num) v /= den;
  return num;
}

Vec iterated_radon(const std::vector<Vec>& pts, int d, int depth, Rng& rng) {
  if (depth == 0)
    return pts[std::uniform_int_distribution<size_t>(0, pts.size() - 1)(rng)];
  std::vector<Vec> group;
  for (int i = 0; i < d + 2; ++i) group.push_back(iterated_radon(pts, d, depth - 1, rng));
  return radon_point(group, d);
}

// Largest strict side fraction over random hyperplanes through c.
double worst_side_fraction(const std::vector<HPoint>& points, const HPoint& c,
                           int trials, Rng& rng) {
  int worst = 0;
  for (int t = 0; t < trials; ++t) {
    Hyperplane h = random_hyperplane_through(c, rng);
    int pos = 0, neg = 0;
    for (const HPoint& p : points) {
      double sd = dist_to_hyperplane(p, h);
      if (sd > 1e-12) ++pos;
      if (sd < -1e-12) ++neg;
    }
    worst = std::max({worst, pos, neg});
  }
  return static_cast<double>(worst) / static_cast<double>(points.size());
}

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

HPoint centerpoint(const std::vector<HPoint>& points, CenterpointMode mode,
                   double eps_bal, uint64_t seed) {
  if (points.empty()) throw std::invalid_argument("centerpoint: empty point set");
  const int d = points[0].dim();
  if (points.size() == 1) return points[0];
  if (mode == CenterpointMode::exact2d) {
    if (d != 2) throw std::invalid_argument("centerpoint: exact2d requires d = 2");
    return exact2d_centerpoint(points);
  }
  std::vector<Vec> klein;
  for (const HPoint& p : points) klein.push_back(convert(p, Model::klein));
  const double bound = static_cast<double>(d) / (d + 1) + eps_bal;
  int depth = static_cast<int>(
      std::ceil(std::log(50.0 * static_cast<double>(points.size())) / std::log(d + 2.0)));
  depth = std::clamp(depth, 4, 8);
  HPoint best;
  double best_frac = 2.0;
  for (int attempt = 0; attempt < 20; ++attempt) {
    Rng rng(mix_seed(seed, attempt));
    Vec c = iterated_radon(klein, d, depth, rng);
    HPoint cand = from_model(Model::klein, c);
    double frac = worst_side_fraction(points, cand, 1000, rng);
    if (frac < best_frac) {
      best_frac = frac;
      best = cand;
    }
    if (frac <= bound) return cand;
  }
  throw std::runtime_error("centerpoint: Radon approximation failed validation");
}

CliqueSeparator find_separator(const NubgInstance& inst, const SquareTilingSpec& spec,
                               int trials, uint64_t seed, double eps_bal) {
  if (inst.points.empty()) throw std::invalid_argument("find_separator: empty instance");
  if (spec.delta >= inst.rho)
    throw std::invalid_argument("find_separator: tile diameter must stay below rho");
  const int n = static_cast<int>(inst.points.size());
  const int d = inst.points[0].dim();
  const double slab = inst.rho * inst.nu;
  const double target = static_cast<double>(d) / (d + 1) + eps_bal;

  Partition part = tiling_partition(inst, spec);
  const int k = static_cast<int>(part.classes.size());
  std::vector<TileId> class_tile;
  for (int c = 0; c < k; ++c)
    class_tile.push_back(locate(spec, inst.points[part.classes[c][0]]));

  HPoint center = (d == 2 && n <= 400)
                      ? centerpoint(inst.points, CenterpointMode::exact2d)
                      : centerpoint(inst.points, CenterpointMode::radon, eps_bal, seed);

  auto build = [&](const Hyperplane& h) {
    CliqueSeparator sep;
    sep.hyperplane = h;
    sep.center = center;
    std::vector<char> in_sep(n, 0);
    for (int c = 0; c < k; ++c) {
      bool hit = false;
      for (int v : part.classes[c])
        if (std::abs(dist_to_hyperplane(inst.points[v], h)) <= slab) {
          hit = true;
          break;
        }
      if (!hit) hit = tile_meets_slab(spec, class_tile[c], h, slab);
      if (hit) {
        sep.classes.push_back(c);
        sep.weight += std::log2(static_cast<double>(part.classes[c].size()) + 1.0);
        for (int v : part.classes[c]) {
          sep.vertices.push_back(v);
          in_sep[v] = 1;
        }
      }
    }
    sep.size = static_cast<int>(sep.classes.size());
    // Largest remaining component.
    std::vector<char> seen(n, 0);
    int largest = 0;
    for (int s = 0; s < n; ++s) {
      if (seen[s] || in_sep[s]) continue;
      int count = 0;
      std::deque<int> queue{s};
      seen[s] = 1;
      while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        ++count;
        for (int v : inst.g.adj[u])
          if (!seen[v] && !in_sep[v]) {
            seen[v] = 1;
            queue.push_back(v);
          }
      }
      largest = std::max(largest, count);
    }
    sep.balance = static_cast<double>(largest) / n;
    return sep;
  };

  bool have_accepted = false, have_any = false;
  CliqueSeparator accepted, best_effort;
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, 1000 + t));
    CliqueSeparator cand = build(random_hyperplane_through(center, rng));
    cand.trials_used = t + 1;
    if (!have_any || cand.balance < best_effort.balance) {
      have_any = true;
      best_effort = cand;
    }
    if (cand.balance <= target &&
        (!have_accepted || cand.weight < accepted.weight)) {
      if (!have_accepted) accepted.trials_used = t + 1;
      int first = have_accepted ? accepted.trials_used : t + 1;
      accepted = cand;
      accepted.trials_used = first;
      have_accepted = true;
    }
  }
  if (!have_accepted) {
    best_effort.partition = std::move(part);
    throw SeparatorError("find_separator: no balanced hyperplane found", best_effort);
  }
  accepted.partition = std::move(part);
  return accepted;
}

SeparatorReport validate_separator(const NubgInstance& inst, const CliqueSeparator& sep,
                                   double eps_bal) {
  const int n = static_cast<int>(inst.points.size());
  const int d = inst.points[0].dim();
  SeparatorReport report;
  report.size = static_cast<int>(sep.classes.size());
  std::vector<char> removed(n, 0);
  for (int c : sep.classes) {
    report.weight +=
        std::log2(static_cast<double>(sep.partition.classes[c].size()) + 1.0);
    for (int v : sep.partition.classes[c]) removed[v] = 1;
  }
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s] || removed[s]) continue;
    int count = 0;
    std::deque<int> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      ++count;
      for (int v : inst.g.adj[u])
        if (!seen[v] && !removed[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
    }
    report.component_sizes.push_back(count);
  }
  std::sort(report.component_sizes.rbegin(), report.component_sizes.rend());
  report.balance = report.component_sizes.empty()
                       ? 0.0
                       : static_cast<double>(report.component_sizes[0]) / n;
  report.balanced = report.balance <= static_cast<double>(d) / (d + 1) + eps_bal;
  return report;
}

}  // namespace hyp
