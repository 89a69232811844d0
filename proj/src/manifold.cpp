#include "hadprox/manifold.hpp"

#include <algorithm>
#include <cmath>

namespace hadprox {

namespace {

bool all_finite(const Vec& v) { return v.allFinite(); }

void require(bool cond, const std::string& what) {
  if (!cond) throw GeometryError(what);
}

// Hyperboloid computations go through the Lorentz boost L_p that maps the
// origin to p. In the boosted frame exp, log and dist have closed forms with
// no cancellation between large coordinates.

// Spatial part of L_p^{-1} y.
Vec unboost_spatial(const Vec& p, const Vec& y) {
  const auto n = p.size() - 1;
  const auto ps = p.tail(n);
  const auto ys = y.tail(n);
  return ys - y(0) * ps + (ps.dot(ys) / (1.0 + p(0))) * ps;
}

// L_p applied to (y0, ys).
Vec boost(const Vec& p, double y0, const Vec& ys) {
  const auto n = p.size() - 1;
  const auto ps = p.tail(n);
  const double pd = ps.dot(ys);
  Vec x(p.size());
  x(0) = p(0) * y0 + pd;
  x.tail(n) = ys + (y0 + pd / (1.0 + p(0))) * ps;
  return x;
}

// Puts x back on the upper sheet by recomputing the time coordinate from the
// spatial part. Rescaling by sqrt(-<x,x>_L) instead loses about eps * x0^2 to
// cancellation, which is a visible radial shift far from the origin.
Vec renormalize_hyperboloid(Vec x) {
  require(all_finite(x) && x(0) > 0, "exp: hyperboloid point left the upper sheet");
  x(0) = std::sqrt(1.0 + x.tail(x.size() - 1).squaredNorm());
  require(std::isfinite(x(0)), "exp: hyperboloid point left the upper sheet");
  return x;
}

}  // namespace

ManifoldId ManifoldId::euclidean(int n) {
  require(n >= 1, "manifold dimension must be >= 1");
  return {Geometry::kEuclidean, n};
}

ManifoldId ManifoldId::hyperboloid(int n) {
  require(n >= 1, "manifold dimension must be >= 1");
  return {Geometry::kHyperboloid, n};
}

std::string ManifoldId::name() const {
  return (kind == Geometry::kEuclidean ? "euclidean(" : "hyperboloid(") + std::to_string(dim) +
         ")";
}

double minkowski(const Vec& x, const Vec& y) {
  return -x(0) * y(0) + x.tail(x.size() - 1).dot(y.tail(y.size() - 1));
}

void check_point(const ManifoldPoint& p) {
  require(p.manifold.dim >= 1, "manifold dimension must be >= 1");
  require(p.coords.size() == p.manifold.ambient_dim(),
          "point has " + std::to_string(p.coords.size()) + " coordinates, " +
              p.manifold.name() + " needs " + std::to_string(p.manifold.ambient_dim()));
  require(all_finite(p.coords), "point has non-finite coordinates");
  if (p.manifold.kind == Geometry::kHyperboloid) {
    const double scale = std::max(1.0, p.coords.squaredNorm());
    require(std::abs(minkowski(p.coords, p.coords) + 1.0) <= kPointTol * scale,
            "point is off the hyperboloid (<p,p>_L != -1)");
    require(p.coords(0) > 0, "point is on the lower sheet of the hyperboloid");
  }
}

void check_same_manifold(const ManifoldPoint& p, const ManifoldPoint& q) {
  require(p.manifold == q.manifold,
          "manifold mismatch: " + p.manifold.name() + " vs " + q.manifold.name());
}

ManifoldPoint make_point(const ManifoldId& m, Vec coords) {
  ManifoldPoint p{m, std::move(coords)};
  check_point(p);
  return p;
}

ManifoldPoint lift_point(const ManifoldId& m, const Vec& spatial) {
  require(spatial.size() == m.dim, "spatial coordinates must have length " + std::to_string(m.dim));
  if (m.kind == Geometry::kEuclidean) return make_point(m, spatial);
  Vec x(m.dim + 1);
  x(0) = std::sqrt(1.0 + spatial.squaredNorm());
  x.tail(m.dim) = spatial;
  return make_point(m, std::move(x));
}

ManifoldPoint origin(const ManifoldId& m) { return lift_point(m, Vec::Zero(m.dim)); }

TangentVector make_tangent(const ManifoldPoint& p, Vec coords) {
  require(coords.size() == p.manifold.ambient_dim(), "tangent has wrong coordinate count");
  require(all_finite(coords), "tangent has non-finite coordinates");
  if (p.manifold.kind == Geometry::kHyperboloid) {
    const double scale = std::max(1.0, p.coords.norm() * coords.norm());
    require(std::abs(minkowski(p.coords, coords)) <= kTangentTol * scale,
            "vector is not tangent to the hyperboloid at its base");
  }
  return {p, std::move(coords)};
}

TangentVector project_tangent(const ManifoldPoint& p, const Vec& ambient) {
  if (p.manifold.kind == Geometry::kEuclidean) return {p, ambient};
  return {p, ambient + minkowski(p.coords, ambient) * p.coords};
}

TangentVector zero_tangent(const ManifoldPoint& p) {
  return {p, Vec::Zero(p.manifold.ambient_dim())};
}

double inner(const TangentVector& u, const TangentVector& v) {
  check_same_manifold(u.base, v.base);
  if (u.base.manifold.kind == Geometry::kEuclidean) return u.coords.dot(v.coords);
  return minkowski(u.coords, v.coords);
}

double norm(const TangentVector& v) {
  if (v.base.manifold.kind == Geometry::kEuclidean) return v.coords.norm();
  return std::sqrt(std::max(0.0, minkowski(v.coords, v.coords)));
}

double dist(const ManifoldPoint& p, const ManifoldPoint& q) {
  check_same_manifold(p, q);
  if (p.manifold.kind == Geometry::kEuclidean) return (p.coords - q.coords).norm();
  // Short range: 4 sinh^2(d/2) = |p - q|_L^2 with the time difference
  // eliminated through q0^2 - p0^2 = |qs|^2 - |ps|^2. With w = (ps + qs)/S,
  // S = p0 + q0, and the spatial difference split along and across w:
  //   c2 = A + B (4 + c2) / S^2.
  const auto n = p.coords.size() - 1;
  const Vec delta = q.coords.tail(n) - p.coords.tail(n);
  const Vec sum = q.coords.tail(n) + p.coords.tail(n);
  const double S = p.coords(0) + q.coords(0);
  const double sum_norm = sum.norm();
  double A = delta.squaredNorm(), B = 0;
  if (sum_norm > 0) {
    const double a = delta.dot(sum) / sum_norm;
    B = a * a;
    A = (delta - (a / sum_norm) * sum).squaredNorm();
  }
  const double c2 = (A + 4 * B / (S * S)) / (1 - B / (S * S));
  if (c2 <= 1.0) return 2.0 * std::asinh(0.5 * std::sqrt(c2));
  // Long range: boost from the point nearer the origin, symmetric in p, q.
  const bool swap = q.coords(0) < p.coords(0);
  const Vec& base = swap ? q.coords : p.coords;
  const Vec& other = swap ? p.coords : q.coords;
  return std::asinh(unboost_spatial(base, other).norm());
}

ManifoldPoint exp(const TangentVector& v) {
  const ManifoldPoint& p = v.base;
  const double len = norm(v);
  if (len < kSmallVector) return p;
  if (p.manifold.kind == Geometry::kEuclidean) {
    Vec x = p.coords + v.coords;
    require(all_finite(x), "exp: non-finite result");
    return {p.manifold, std::move(x)};
  }
  require(std::isfinite(std::cosh(len)), "exp: tangent too long (overflow)");
  const Vec u = unboost_spatial(p.coords, v.coords);
  const double r = u.norm();
  if (r < kSmallVector) return p;
  Vec x = boost(p.coords, std::cosh(r), (std::sinh(r) / r) * u);
  return {p.manifold, renormalize_hyperboloid(std::move(x))};
}

TangentVector log(const ManifoldPoint& p, const ManifoldPoint& q) {
  check_same_manifold(p, q);
  if (p.manifold.kind == Geometry::kEuclidean) return {p, q.coords - p.coords};
  const Vec w = unboost_spatial(p.coords, q.coords);
  const double r = w.norm();
  const double d = std::asinh(r);
  if (d < kSmallVector) return zero_tangent(p);
  return {p, boost(p.coords, 0.0, (d / r) * w)};
}

TangentVector grad_sq_dist(const ManifoldPoint& q, const ManifoldPoint& p) {
  return scale(log(p, q), -2.0);
}

double comparison_residual(const ManifoldPoint& p1, const ManifoldPoint& p2,
                           const ManifoldPoint& p3, double inner_coefficient) {
  check_same_manifold(p1, p2);
  check_same_manifold(p1, p3);
  const double d12 = dist(p1, p2);
  const double d13 = dist(p1, p3);
  const double d32 = dist(p3, p2);
  const double cross = inner(log(p3, p1), log(p3, p2));
  return d12 * d12 - (d13 * d13 + d32 * d32 - inner_coefficient * cross);
}

ManifoldPoint geodesic(const ManifoldPoint& p, const ManifoldPoint& q, double t) {
  return exp(scale(log(p, q), t));
}

TangentVector scale(const TangentVector& v, double a) { return {v.base, a * v.coords}; }

TangentVector add(const TangentVector& u, const TangentVector& v) {
  check_same_manifold(u.base, v.base);
  return {u.base, u.coords + v.coords};
}

ManifoldPoint random_point(const ManifoldId& m, std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> uni(-radius, radius);
  Vec x(m.dim);
  for (int i = 0; i < m.dim; ++i) x(i) = uni(rng);
  return lift_point(m, x);
}

TangentVector random_tangent(const ManifoldPoint& p, std::mt19937_64& rng, double length) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec a(p.manifold.ambient_dim());
  for (int i = 0; i < a.size(); ++i) a(i) = gauss(rng);
  TangentVector v = project_tangent(p, a);
  const double n = norm(v);
  if (n < kSmallVector) return zero_tangent(p);
  return scale(v, length / n);
}

}  // namespace hadprox
