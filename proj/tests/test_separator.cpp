#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "hyp/geom.hpp"
#include "hyp/nubg.hpp"
#include "hyp/separator.hpp"
#include "hyp/tiling.hpp"

using namespace hyp;
constexpr double kPi = std::numbers::pi;

namespace {

std::vector<HPoint> random_points(int n, int d, double R, uint64_t seed) {
  Rng rng(seed);
  std::vector<HPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back(random_ball_point(d, R, rng));
  return pts;
}

// Largest count of points strictly on one side of any of `trials` random
// hyperplanes through c.
int worst_side(const std::vector<HPoint>& pts, const HPoint& c, int trials, uint64_t seed) {
  Rng rng(seed);
  int worst = 0;
  for (int t = 0; t < trials; ++t) {
    Hyperplane h = random_hyperplane_through(c, rng);
    int pos = 0, neg = 0;
    for (const HPoint& p : pts) {
      double sd = dist_to_hyperplane(p, h);
      if (sd > 1e-12) ++pos;
      if (sd < -1e-12) ++neg;
    }
    worst = std::max({worst, pos, neg});
  }
  return worst;
}

struct Fit {
  double slope, intercept, r2;
};
Fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  Fit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  double num = n * sxy - sx * sy;
  f.r2 = num * num / ((n * sxx - sx * sx) * (n * syy - sy * sy));
  return f;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("centerpoint exact2d") {
  {
    std::vector<HPoint> one{make_point({std::cosh(2.0), std::sinh(2.0), 0.0})};
    HPoint c = centerpoint(one, CenterpointMode::exact2d);
    CHECK(dist(c, one[0]) < 1e-9);
  }
  {
    // Three non-collinear points: every line through the result leaves at
    // most ceil(2n/3) = 2 strictly on each side (trivially n <= 3), and the
    // result lies in their convex hull region, i.e. close to the triangle.
    std::vector<HPoint> tri{origin(2), make_point({std::cosh(1.0), std::sinh(1.0), 0.0}),
                            make_point({std::cosh(1.0), 0.0, std::sinh(1.0)})};
    HPoint c = centerpoint(tri, CenterpointMode::exact2d);
    CHECK(worst_side(tri, c, 1000, 5) <= 2);
    for (const HPoint& p : tri) CHECK(dist(c, p) < 2.0);
  }
  {
    // Points uniform on a circle: centerpoint close to the center.
    std::vector<HPoint> ring;
    const double r = 3.0;
    for (int i = 0; i < 400; ++i) {
      double a = 2 * kPi * i / 400.0;
      ring.push_back(
          make_point({std::cosh(r), std::sinh(r) * std::cos(a), std::sinh(r) * std::sin(a)}));
    }
    HPoint c = centerpoint(ring, CenterpointMode::exact2d);
    CHECK(dist(c, origin(2)) < 0.1 * r);
    CHECK(worst_side(ring, c, 1000, 6) <= (2 * 400 + 2) / 3);
  }
  // Random sets: the line-depth guarantee holds.
  for (uint64_t seed : {1u, 2u, 3u}) {
    std::vector<HPoint> pts = random_points(60, 2, 3.0, seed);
    HPoint c = centerpoint(pts, CenterpointMode::exact2d);
    CHECK(worst_side(pts, c, 1000, seed + 50) <= (2 * 60 + 2) / 3);
  }
  CHECK_THROWS(centerpoint({}, CenterpointMode::exact2d));
  CHECK_THROWS(centerpoint(random_points(5, 3, 2.0, 1), CenterpointMode::exact2d));
}

TEST_CASE("centerpoint radon approximation") {
  for (int d : {2, 3}) {
    for (uint64_t seed : {11u, 12u}) {
      std::vector<HPoint> pts = random_points(500, d, 3.5, seed);
      HPoint c = centerpoint(pts, CenterpointMode::radon, 0.05, seed);
      // Slightly looser bound than the internal validation to avoid
      // borderline flakiness with fresh hyperplanes.
      double bound = (static_cast<double>(d) / (d + 1) + 0.07) * 500;
      CHECK(worst_side(pts, c, 1000, seed + 77) <= bound);
    }
  }
}

TEST_CASE("separator on two far clusters is empty") {
  Rng rng(8);
  std::vector<HPoint> pts;
  const double rho = 0.5;
  for (int side : {-1, 1}) {
    Isometry shift = translate_to(
        make_point({std::cosh(10.0), side * std::sinh(10.0), 0.0}));
    for (int i = 0; i < 40; ++i) pts.push_back(shift.apply(random_ball_point(2, 1.0, rng)));
  }
  NubgInstance inst = build_graph(pts, rho, 1.0);
  SquareTilingSpec spec = square_tiling(2, rho * 0.99);
  CliqueSeparator sep = find_separator(inst, spec, 64, 3);
  CHECK(sep.weight == doctest::Approx(0.0));
  CHECK(sep.size == 0);
  CHECK(sep.balance <= 2.0 / 3 + 0.05);
}

TEST_CASE("separator with all points in one tile") {
  SquareTilingSpec spec = square_tiling(2, 0.6 * 0.99);
  TileId base;
  base.a = {0};
  base.b = 0;
  Vec c = convert(tile_center(spec, base), Model::halfspace);
  Rng rng(9);
  std::vector<HPoint> pts;
  for (int i = 0; i < 20; ++i) {
    std::uniform_real_distribution<double> j(-1e-3, 1e-3);
    pts.push_back(from_model(Model::halfspace, {c[0] + j(rng), c[1] + j(rng)}));
  }
  NubgInstance inst = build_graph(pts, 0.6, 1.0);
  CliqueSeparator sep = find_separator(inst, spec, 16, 4);
  REQUIRE(sep.size == 1);
  CHECK(sep.weight == doctest::Approx(std::log2(21.0)));
  CHECK(sep.balance == doctest::Approx(0.0));
}

TEST_CASE("separator validity, witness, and determinism on random instances") {
  const double rho = 0.5, nu = 1.0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<HPoint> pts = random_points(100, 2, 3.5, 100 + seed);
    NubgInstance inst = build_graph(pts, rho, nu);
    SquareTilingSpec spec = square_tiling(2, rho * 0.99);
    CliqueSeparator sep = find_separator(inst, spec, 64, seed);

    SeparatorReport report = validate_separator(inst, sep);
    CHECK(report.balanced);
    CHECK(report.size == sep.size);
    CHECK(report.weight == doctest::Approx(sep.weight));
    CHECK(report.balance == doctest::Approx(sep.balance));

    // No edge joins two distinct remaining components.
    std::set<int> removed(sep.vertices.begin(), sep.vertices.end());
    std::vector<int> comp(inst.g.n, -1);
    int nc = 0;
    for (int s = 0; s < inst.g.n; ++s) {
      if (comp[s] >= 0 || removed.count(s)) continue;
      comp[s] = nc;
      std::vector<int> stack{s};
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : inst.g.adj[u])
          if (comp[v] < 0 && !removed.count(v)) {
            comp[v] = nc;
            stack.push_back(v);
          }
      }
      ++nc;
    }
    for (auto [u, v] : inst.g.edges())
      if (!removed.count(u) && !removed.count(v)) CHECK(comp[u] == comp[v]);

    // Geometric witness: survivors are either far from the hyperplane or in
    // a tile missing its slab.
    const double slab = rho * nu;
    for (int v = 0; v < inst.g.n; ++v) {
      if (removed.count(v)) continue;
      bool far = std::abs(dist_to_hyperplane(inst.points[v], sep.hyperplane)) > slab;
      bool tile_out = !tile_meets_slab(spec, locate(spec, inst.points[v]),
                                       sep.hyperplane, slab);
      CHECK((far || tile_out));
      CHECK(far);  // the point-level inclusion rule guarantees this alone
    }

    // Same seed, same answer.
    CliqueSeparator again = find_separator(inst, spec, 64, seed);
    CHECK(again.classes == sep.classes);
    CHECK(again.weight == doctest::Approx(sep.weight));
    CHECK(again.trials_used == sep.trials_used);
  }
}

TEST_CASE("separator error carries a best-effort candidate") {
  // A long 1-D chain: hyperplanes through the centerpoint cut it well, so to
  // force failure we allow zero trials... instead use trials=1 with a seed
  // chosen so the single hyperplane is nearly parallel to the chain. Rather
  // than hunt seeds, use a star of heavy clusters plus trials=0-equivalent:
  // trials must be >= 1, so assert the exception interface with an
  // unsatisfiable balance threshold instead.
  std::vector<HPoint> pts = random_points(60, 2, 3.0, 77);
  NubgInstance inst = build_graph(pts, 0.5, 1.0);
  SquareTilingSpec spec = square_tiling(2, 0.5 * 0.99);
  bool threw = false;
  try {
    find_separator(inst, spec, 4, 1, /*eps_bal=*/-2.0 / 3);  // target balance <= 0
  } catch (const SeparatorError& e) {
    threw = true;
    CHECK(e.best.balance > 0.0);
    CHECK(!e.best.partition.classes.empty());
  }
  CHECK(threw);
}

TEST_CASE("separator scaling in the plane: size ~ log n, weight ~ log^2 n") {
  const double rho = 0.5;
  // Density 8 points per unit area keeps the ball graph supercritical, so
  // the slab census tracks the ball radius instead of sampling noise.
  std::vector<double> xs, sizes, weights, ns;
  for (int e = 9; e <= 13; ++e) {
    int n = 1 << e;
    double R = std::acosh(1.0 + n / (8.0 * 2 * kPi));
    std::vector<double> ssize, sweight;
    for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      NubgInstance inst = build_graph(random_points(n, 2, R, 1000 * e + seed), rho, 1.0);
      SquareTilingSpec spec = square_tiling(2, rho * 0.99);
      CliqueSeparator sep = find_separator(inst, spec, 64, seed);
      CHECK(validate_separator(inst, sep).balanced);
      ssize.push_back(sep.size);
      sweight.push_back(sep.weight);
    }
    xs.push_back(e);  // log2 n
    ns.push_back(n);
    sizes.push_back(median(ssize));
    weights.push_back(median(sweight));
  }
  Fit f = fit_line(xs, sizes);
  CHECK(f.slope > 0.0);
  CHECK(f.r2 >= 0.8);
  // Weight growth no faster than log^2 shape (up to 50% slack).
  double shape = (xs.back() * xs.back()) / (xs.front() * xs.front());
  CHECK(weights.back() / weights.front() <= 1.5 * shape);
}

TEST_CASE("separator scaling in three dimensions: size ~ sqrt(n)") {
  const double rho = 0.5;
  std::vector<double> xs, ys;
  for (int e = 9; e <= 13; ++e) {
    int n = 1 << e;
    double R = 0.5 * std::log(2.0 * n / kPi);  // ball volume ~ n
    std::vector<double> ssize;
    for (uint64_t seed : {1u, 2u}) {
      NubgInstance inst = build_graph(random_points(n, 3, R, 2000 * e + seed), rho, 1.0);
      SquareTilingSpec spec = square_tiling(3, rho * 0.99);
      CliqueSeparator sep = find_separator(inst, spec, 32, seed);
      CHECK(validate_separator(inst, sep).balanced);
      ssize.push_back(sep.size);
    }
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(median(ssize)));
  }
  Fit f = fit_line(xs, ys);
  CHECK(f.slope >= 0.35);
  CHECK(f.slope <= 0.65);
}
