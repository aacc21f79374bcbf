#include "hyp/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hyp {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Solves A x = b (n x n) by Gaussian elimination with partial pivoting.
Vec solve_linear(std::vector<Vec> a, Vec b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) throw PrecisionError("singular linear system");
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace

double mink(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "mink: dimension mismatch");
  double s = -a[0] * b[0];
  for (size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Model model_from_string(const std::string& s) {
  if (s == "hyperboloid") return Model::hyperboloid;
  if (s == "ball") return Model::ball;
  if (s == "halfspace") return Model::halfspace;
  if (s == "klein") return Model::klein;
  throw std::invalid_argument("unknown model: " + s);
}

std::string model_to_string(Model m) {
  switch (m) {
    case Model::hyperboloid: return "hyperboloid";
    case Model::ball: return "ball";
    case Model::halfspace: return "halfspace";
    case Model::klein: return "klein";
  }
  return "?";
}

HPoint origin(int d) {
  require(d >= 1, "origin: d must be >= 1");
  HPoint p;
  p.x.assign(d + 1, 0.0);
  p.x[0] = 1.0;
  return p;
}

void check_point(const HPoint& p) {
  require(p.dim() >= 1, "HPoint: dimension must be >= 1");
  if (p.x[0] < 1.0 - 1e-9)
    throw PrecisionError("HPoint off the upper hyperboloid sheet");
  if (p.x[0] <= 1e8) {
    double q = -mink(p.x, p.x);
    // cancellation in the form scales with x0^2; tolerance follows suit
    double tol = 1e-9 * std::max(1.0, p.x[0] * p.x[0]);
    if (std::abs(q - 1.0) > tol)
      throw PrecisionError("HPoint off the upper hyperboloid sheet");
  }
  if (p.x[0] > std::cosh(kMaxRadius))
    throw PrecisionError("HPoint beyond working radius 34");
}

HPoint make_point(Vec coords) {
  require(coords.size() >= 2, "make_point: need d+1 >= 2 coordinates");
  if (coords[0] < 0) throw PrecisionError("make_point: lower sheet");
  // Beyond x0 ~ 1e8 the quadratic form drowns in cancellation; there we only
  // enforce the radius guard and trust the caller's coordinates.
  if (coords[0] <= 1e8) {
    double q = -mink(coords, coords);
    if (q <= 0.0) throw PrecisionError("make_point: coordinates not timelike");
    double s = 1.0 / std::sqrt(q);
    for (double& c : coords) c *= s;
  }
  HPoint p{std::move(coords)};
  check_point(p);
  return p;
}

double dist(const HPoint& p, const HPoint& q) {
  require(p.dim() == q.dim(), "dist: dimension mismatch");
  double a = -mink(p.x, q.x);
  if (a < 1.0) {
    if (a < 1.0 - 1e-6) throw PrecisionError("dist: acosh argument far below 1");
    a = 1.0;
  }
  return std::acosh(a);
}

double radius(const HPoint& p) { return std::acosh(std::max(1.0, p.x[0])); }

Vec convert(const HPoint& p, Model m) {
  const int d = p.dim();
  switch (m) {
    case Model::hyperboloid:
      return p.x;
    case Model::ball: {
      Vec b(d);
      double den = 1.0 + p.x[0];
      for (int i = 0; i < d; ++i) b[i] = p.x[i + 1] / den;
      return b;
    }
    case Model::klein: {
      Vec k(d);
      for (int i = 0; i < d; ++i) k[i] = p.x[i + 1] / p.x[0];
      return k;
    }
    case Model::halfspace: {
      // y = (x_1..x_{d-1}, 1) / (x0 - x_d); same map as the standard
      // ball -> upper half-space inversion through the boundary point e_d.
      double den = p.x[0] - p.x[d];
      if (den < kBoundaryTol) throw PrecisionError("halfspace: point maps to infinity");
      Vec y(d);
      for (int i = 0; i < d - 1; ++i) y[i] = p.x[i + 1] / den;
      y[d - 1] = 1.0 / den;
      return y;
    }
  }
  throw std::invalid_argument("convert: bad model");
}

HPoint from_model(Model m, const Vec& c) {
  switch (m) {
    case Model::hyperboloid:
      return make_point(c);
    case Model::ball: {
      const int d = static_cast<int>(c.size());
      require(d >= 1, "from_model: empty coordinates");
      double nb = 0.0;
      for (double v : c) nb += v * v;
      if (nb > 1.0 - kBoundaryTol)
        throw PrecisionError("ball point too close to the boundary");
      Vec x(d + 1);
      double den = 1.0 - nb;
      x[0] = (1.0 + nb) / den;
      for (int i = 0; i < d; ++i) x[i + 1] = 2.0 * c[i] / den;
      return make_point(std::move(x));
    }
    case Model::klein: {
      const int d = static_cast<int>(c.size());
      double nk = 0.0;
      for (double v : c) nk += v * v;
      if (nk > 1.0 - kBoundaryTol)
        throw PrecisionError("klein point too close to the boundary");
      Vec x(d + 1);
      x[0] = 1.0 / std::sqrt(1.0 - nk);
      for (int i = 0; i < d; ++i) x[i + 1] = c[i] * x[0];
      return make_point(std::move(x));
    }
    case Model::halfspace: {
      const int d = static_cast<int>(c.size());
      if (c[d - 1] <= 0.0)
        throw std::invalid_argument("halfspace point must have last coordinate > 0");
      double ny = 0.0;
      for (double v : c) ny += v * v;
      double yd = c[d - 1];
      Vec x(d + 1);
      x[0] = (ny + 1.0) / (2.0 * yd);
      for (int i = 0; i < d - 1; ++i) x[i + 1] = c[i] / yd;
      x[d] = (ny - 1.0) / (2.0 * yd);
      return make_point(std::move(x));
    }
  }
  throw std::invalid_argument("from_model: bad model");
}

HPoint Isometry::apply(const HPoint& p) const {
  require(p.dim() == d, "Isometry::apply: dimension mismatch");
  return make_point(apply_vec(p.x));
}

Vec Isometry::apply_vec(const Vec& v) const {
  require(static_cast<int>(v.size()) == d + 1, "Isometry::apply_vec: dimension mismatch");
  Vec r(d + 1, 0.0);
  for (int i = 0; i <= d; ++i) {
    double s = 0.0;
    for (int j = 0; j <= d; ++j) s += at(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

Isometry Isometry::compose(const Isometry& o) const {
  require(d == o.d, "Isometry::compose: dimension mismatch");
  Isometry r = identity_isometry(d);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) {
      double s = 0.0;
      for (int k = 0; k <= d; ++k) s += at(i, k) * o.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

Isometry Isometry::inverse() const {
  // M^{-1} = J M^T J for Lorentz M, with J = diag(-1,1,...,1).
  Isometry r = identity_isometry(d);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) {
      double sign = ((i == 0) != (j == 0)) ? -1.0 : 1.0;
      r.at(i, j) = sign * at(j, i);
    }
  return r;
}

double Isometry::lorentz_defect() const {
  double worst = 0.0;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) {
      double s = 0.0;
      for (int k = 0; k <= d; ++k) {
        double jk = (k == 0) ? -1.0 : 1.0;
        s += at(k, i) * jk * at(k, j);
      }
      double want = (i == j) ? ((i == 0) ? -1.0 : 1.0) : 0.0;
      worst = std::max(worst, std::abs(s - want));
    }
  return worst;
}

Isometry identity_isometry(int d) {
  Isometry m;
  m.d = d;
  m.m.assign(static_cast<size_t>(d + 1) * (d + 1), 0.0);
  for (int i = 0; i <= d; ++i) m.at(i, i) = 1.0;
  return m;
}

Isometry translate_to(const HPoint& p) {
  check_point(p);
  const int d = p.dim();
  Isometry m = identity_isometry(d);
  m.at(0, 0) = p.x[0];
  for (int i = 1; i <= d; ++i) {
    m.at(0, i) = p.x[i];
    m.at(i, 0) = p.x[i];
    for (int j = 1; j <= d; ++j)
      m.at(i, j) = (i == j ? 1.0 : 0.0) + p.x[i] * p.x[j] / (1.0 + p.x[0]);
  }
  return m;
}

Isometry rotation_xy(int d, double theta) {
  require(d >= 2, "rotation_xy: d >= 2");
  Isometry m = identity_isometry(d);
  m.at(1, 1) = std::cos(theta);
  m.at(1, 2) = -std::sin(theta);
  m.at(2, 1) = std::sin(theta);
  m.at(2, 2) = std::cos(theta);
  return m;
}

Isometry isometry_from_correspondence(const std::vector<HPoint>& src,
                                      const std::vector<HPoint>& dst) {
  require(!src.empty() && src.size() == dst.size(), "correspondence size mismatch");
  const int d = src[0].dim();
  require(static_cast<int>(src.size()) == d + 1, "need exactly d+1 point pairs");
  // M V = W with V, W holding points as columns: V^T (row_r M)^T = (row_r W^T).
  std::vector<Vec> vt(d + 1, Vec(d + 1));
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) vt[i][j] = src[i].x[j];  // row i = src point i
  Isometry m = identity_isometry(d);
  for (int r = 0; r <= d; ++r) {
    Vec b(d + 1);
    for (int i = 0; i <= d; ++i) b[i] = dst[i].x[r];
    Vec row = solve_linear(vt, b);
    for (int j = 0; j <= d; ++j) m.at(r, j) = row[j];
  }
  return m;
}

Hyperplane random_hyperplane_through(const HPoint& p, Rng& rng) {
  check_point(p);
  const int d = p.dim();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec u(d);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (int i = 0; i < d; ++i) {
      u[i] = gauss(rng);
      n2 += u[i] * u[i];
    }
  } while (n2 < 1e-12);
  double inv = 1.0 / std::sqrt(n2);
  Vec n0(d + 1, 0.0);
  for (int i = 0; i < d; ++i) n0[i + 1] = u[i] * inv;
  Isometry t = translate_to(p);
  Hyperplane h;
  h.base = p;
  h.normal = t.apply_vec(n0);
  return h;
}

double dist_to_hyperplane(const HPoint& p, const Hyperplane& h) {
  require(p.dim() == h.dim(), "dist_to_hyperplane: dimension mismatch");
  return std::asinh(mink(p.x, h.normal));
}

Isometry reflect(const Hyperplane& h) {
  const int d = h.dim();
  Isometry r = identity_isometry(d);
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) {
      double jn = (j == 0) ? -h.normal[j] : h.normal[j];
      r.at(i, j) -= 2.0 * h.normal[i] * jn;
    }
  return r;
}

double unit_sphere_area(int d) {
  return 2.0 * std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0);
}

namespace {
// int_0^r sinh^k(x) dx by the standard reduction formula.
double sinh_integral(int k, double r) {
  if (k == 0) return r;
  if (k == 1) return std::cosh(r) - 1.0;
  double sh = std::sinh(r), ch = std::cosh(r);
  return (std::pow(sh, k - 1) * ch - (k - 1) * sinh_integral(k - 2, r)) / k;
}

double simpson(double (*f)(double, int), int k, double a, double b, int n) {
  double h = (b - a) / n, s = f(a, k) + f(b, k);
  for (int i = 1; i < n; ++i) s += f(a + i * h, k) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double sinh_pow(double x, int k) { return std::pow(std::sinh(x), k); }
}  // namespace

double ball_volume(int d, double r) {
  require(d >= 2, "ball_volume: d >= 2");
  require(r >= 0.0, "ball_volume: r must be >= 0");
  return unit_sphere_area(d) * sinh_integral(d - 1, r);
}

double ball_volume_quad(int d, double r) {
  require(d >= 2, "ball_volume: d >= 2");
  require(r >= 0.0, "ball_volume: r must be >= 0");
  if (r == 0.0) return 0.0;
  int n = 2048;
  return unit_sphere_area(d) * simpson(&sinh_pow, d - 1, 0.0, r, n);
}

HPoint horosphere_embed(const Vec& x, double t) {
  require(t > 0.0, "horosphere_embed: t must be positive");
  Vec y(x.size() + 1);
  std::copy(x.begin(), x.end(), y.begin());
  y[x.size()] = t;
  return from_model(Model::halfspace, y);
}

HPoint geodesic_point(const HPoint& p, const HPoint& q, double t) {
  double s = dist(p, q);
  if (s < 1e-15) return p;
  const int n = p.dim() + 1;
  Vec u(n), r(n);
  double chs = std::cosh(s), shs = std::sinh(s);
  for (int i = 0; i < n; ++i) u[i] = (q.x[i] - chs * p.x[i]) / shs;
  double cht = std::cosh(t), sht = std::sinh(t);
  for (int i = 0; i < n; ++i) r[i] = cht * p.x[i] + sht * u[i];
  return make_point(std::move(r));
}

HPoint random_ball_point(int d, double R, Rng& rng) {
  require(d >= 2 && R >= 0.0, "random_ball_point: bad arguments");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec u(d);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (int i = 0; i < d; ++i) {
      u[i] = gauss(rng);
      n2 += u[i] * u[i];
    }
  } while (n2 < 1e-12);
  double inv = 1.0 / std::sqrt(n2);
  // invert the radial CDF Vol(r)/Vol(R) by bisection
  double target = unif(rng) * ball_volume(d, R);
  double lo = 0.0, hi = R;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (ball_volume(d, mid) < target ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  Vec x(d + 1);
  x[0] = std::cosh(r);
  double sh = std::sinh(r);
  for (int i = 0; i < d; ++i) x[i + 1] = sh * u[i] * inv;
  return make_point(std::move(x));
}

}  // namespace hyp
