#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

// Hyperbolic geometry core. Canonical representation: hyperboloid (Minkowski)
// model in R^{d+1} with signature (-,+,...,+); upper sheet x0 >= 1.

namespace hyp {

using Rng = std::mt19937_64;

// Maximum hyperbolic distance from the model origin that operations accept.
// Beyond this, double precision cosh products degrade too far.
inline constexpr double kMaxRadius = 34.0;
// Rounding noise this close to a domain boundary is clamped; farther out it
// is treated as a genuine error.
inline constexpr double kBoundaryTol = 1e-12;

struct PrecisionError : std::runtime_error {
  explicit PrecisionError(const std::string& w) : std::runtime_error(w) {}
};

using Vec = std::vector<double>;

// Minkowski bilinear form <a,b> = -a0*b0 + sum_i ai*bi.
double mink(const Vec& a, const Vec& b);

struct HPoint {
  Vec x;  // size d+1
  int dim() const { return static_cast<int>(x.size()) - 1; }
  bool operator==(const HPoint& o) const { return x == o.x; }
};

enum class Model { hyperboloid, ball, halfspace, klein };

Model model_from_string(const std::string& s);
std::string model_to_string(Model m);

HPoint origin(int d);

// Builds an HPoint from raw hyperboloid coordinates, renormalizing onto the
// sheet; rejects points off-sheet by more than the boundary tolerance or
// beyond the working radius.
HPoint make_point(Vec coords);

// Checks the sheet invariant and working radius; throws on violation.
void check_point(const HPoint& p);

double dist(const HPoint& p, const HPoint& q);
double radius(const HPoint& p);  // dist to origin

// model coordinate vectors have length d (d+1 for hyperboloid).
Vec convert(const HPoint& p, Model m);
HPoint from_model(Model m, const Vec& c);

struct Isometry {
  int d = 0;
  Vec m;  // (d+1)x(d+1), row-major
  double at(int i, int j) const { return m[static_cast<size_t>(i) * (d + 1) + j]; }
  double& at(int i, int j) { return m[static_cast<size_t>(i) * (d + 1) + j]; }
  HPoint apply(const HPoint& p) const;
  Vec apply_vec(const Vec& v) const;  // linear action on R^{d+1}
  Isometry compose(const Isometry& other) const;  // this after other
  Isometry inverse() const;                       // J M^T J
  // max |M^T J M - J| entry; ~0 for a Lorentz transform
  double lorentz_defect() const;
};

Isometry identity_isometry(int d);
// Hyperbolic translation (boost) carrying the origin to p.
Isometry translate_to(const HPoint& p);
// Rotation in the (e1,e2) plane fixing the origin (d >= 2).
Isometry rotation_xy(int d, double theta);
// Least-squares-free exact solve: isometry M with M*src[i] = dst[i] for d+1
// independent hyperboloid points (used to turn model-space maps into Lorentz
// matrices).
Isometry isometry_from_correspondence(const std::vector<HPoint>& src,
                                      const std::vector<HPoint>& dst);

struct Hyperplane {
  HPoint base;  // a point on the hyperplane
  Vec normal;   // unit spacelike: <n,n>_M = 1, <n,base>_M = 0
  int dim() const { return base.dim(); }
};

// Uniformly random hyperplane through p (normal uniform on the unit sphere of
// the tangent space at p).
Hyperplane random_hyperplane_through(const HPoint& p, Rng& rng);
// Signed distance: asinh(<p, n>_M).
double dist_to_hyperplane(const HPoint& p, const Hyperplane& h);
// Reflection through h, as an isometry.
Isometry reflect(const Hyperplane& h);

// Volume of a radius-r ball in H^d: omega_d * int_0^r sinh^{d-1}.
double ball_volume(int d, double r);
// Same by adaptive quadrature (cross-check / general d).
double ball_volume_quad(int d, double r);
// Surface measure of the Euclidean unit (d-1)-sphere.
double unit_sphere_area(int d);

// Point of the horosphere {y_d = t} (half-space model) above Euclidean
// position x in R^{d-1}. On that horosphere,
// dist = 2 asinh(|x-y| / (2t)).
HPoint horosphere_embed(const Vec& x, double t);

// Point at arc-length t along the unit-speed geodesic from p toward q.
HPoint geodesic_point(const HPoint& p, const HPoint& q, double t);

// Uniform point in B(origin, R): direction uniform, radius density
// proportional to sinh^{d-1}.
HPoint random_ball_point(int d, double R, Rng& rng);

}  // namespace hyp
