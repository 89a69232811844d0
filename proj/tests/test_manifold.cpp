#include "hadprox/manifold.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hadprox;

namespace {

Vec v3(double a, double b, double c) { return Vec{{a, b, c}}; }

// Length of the geodesic p -> q, integrated as a polyline in ambient
// coordinates with the Minkowski (resp. Euclidean) line element.
double arc_length(const ManifoldPoint& p, const ManifoldPoint& q, int segments) {
  double len = 0;
  ManifoldPoint prev = p;
  for (int i = 1; i <= segments; ++i) {
    const ManifoldPoint cur = geodesic(p, q, double(i) / segments);
    const Vec d = cur.coords - prev.coords;
    len += std::sqrt(std::max(0.0, cur.manifold.kind == Geometry::kHyperboloid ? minkowski(d, d) : d.squaredNorm()));
    prev = cur;
  }
  return len;
}

}  // namespace

TEST(Manifold, ExpOfUnitTangentAtOrigin) {
  const auto H = ManifoldId::hyperboloid(2);
  const ManifoldPoint o = make_point(H, v3(1, 0, 0));
  const ManifoldPoint x = exp(make_tangent(o, v3(0, 1, 0)));
  EXPECT_NEAR(x.coords[0], std::cosh(1.0), 1e-14);
  EXPECT_NEAR(x.coords[1], std::sinh(1.0), 1e-14);
  EXPECT_NEAR(x.coords[2], 0.0, 1e-14);
  const TangentVector back = log(o, x);
  EXPECT_NEAR((back.coords - v3(0, 1, 0)).norm(), 0.0, 1e-13);
  EXPECT_NEAR(dist(o, x), 1.0, 1e-14);
}

TEST(Manifold, LiftPutsPointOnUpperSheet) {
  const auto H = ManifoldId::hyperboloid(3);
  const ManifoldPoint p = lift_point(H, Vec{{0.3, -2.0, 5.0}});
  EXPECT_NEAR(minkowski(p.coords, p.coords), -1.0, 1e-12);
  EXPECT_GT(p.coords[0], 0);
  EXPECT_THROW(make_point(H, Vec{{-std::sqrt(2.0), 1.0, 0.0, 0.0}}), GeometryError);
  EXPECT_THROW(make_point(H, Vec{{1.0, 1.0, 0.0, 0.0}}), GeometryError);
  EXPECT_THROW(make_point(H, Vec{{1.0, 0.0}}), GeometryError);
}

TEST(Manifold, TangentValidation) {
  const auto H = ManifoldId::hyperboloid(2);
  const ManifoldPoint o = origin(H);
  EXPECT_THROW(make_tangent(o, v3(1, 0, 0)), GeometryError);
  const TangentVector t = project_tangent(o, v3(5, 1, 2));
  EXPECT_NEAR(minkowski(t.coords, o.coords), 0.0, 1e-14);
  EXPECT_NEAR((t.coords - v3(0, 1, 2)).norm(), 0.0, 1e-14);
}

TEST(Manifold, SmallVectorGuard) {
  for (const auto m : {ManifoldId::euclidean(2), ManifoldId::hyperboloid(2)}) {
    std::mt19937_64 rng(3);
    const ManifoldPoint p = random_point(m, rng, 1.0);
    const ManifoldPoint q = exp(random_tangent(p, rng, 1e-14));
    EXPECT_EQ(exp(zero_tangent(p)).coords, p.coords);
    EXPECT_LE((q.coords - p.coords).norm(), 1e-13);
    EXPECT_EQ(log(p, p).coords.norm(), 0.0);
  }
}

TEST(Manifold, RoundTripAndSymmetry) {
  for (const auto m : {ManifoldId::euclidean(3), ManifoldId::hyperboloid(3)}) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
      const ManifoldPoint p = random_point(m, rng, 3.0);
      const TangentVector v = random_tangent(p, rng, 10.0 * std::uniform_real_distribution<double>(0, 1)(rng));
      const ManifoldPoint q = exp(v);
      const TangentVector w = log(p, q);
      EXPECT_LE((w.coords - v.coords).norm(), 1e-8 * (1 + norm(v))) << m.name();
      EXPECT_NEAR(norm(w), dist(p, q), 1e-9 * (1 + dist(p, q)));
      EXPECT_NEAR(dist(p, q), dist(q, p), 1e-12 * (1 + dist(p, q)));
    }
  }
}

TEST(Manifold, DistanceMatchesArcLength) {
  for (const auto m : {ManifoldId::euclidean(2), ManifoldId::hyperboloid(2)}) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
      const ManifoldPoint p = random_point(m, rng, 1.5);
      const ManifoldPoint q = random_point(m, rng, 1.5);
      const double d = dist(p, q);
      EXPECT_NEAR(arc_length(p, q, 4000), d, 1e-6 * (1 + d)) << m.name();
    }
  }
}

TEST(Manifold, GradientOfSquaredDistanceMatchesFiniteDifferences) {
  for (const auto m : {ManifoldId::euclidean(3), ManifoldId::hyperboloid(3)}) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
      const ManifoldPoint q = random_point(m, rng, 1.0);
      const ManifoldPoint p = random_point(m, rng, 1.0);
      const TangentVector g = grad_sq_dist(q, p);
      const TangentVector u = random_tangent(p, rng, 1.0);
      const double h = 1e-5;
      const double fd = (std::pow(dist(q, exp(scale(u, h))), 2) - std::pow(dist(q, exp(scale(u, -h))), 2)) / (2 * h);
      EXPECT_NEAR(inner(g, u), fd, 1e-6 * (1 + std::abs(fd))) << m.name();
    }
  }
}

TEST(Manifold, ComparisonInequality) {
  std::mt19937_64 rng(21);
  const auto E = ManifoldId::euclidean(2);
  const auto H = ManifoldId::hyperboloid(2);
  for (int i = 0; i < 200; ++i) {
    const ManifoldPoint a = random_point(E, rng, 2), b = random_point(E, rng, 2), c = random_point(E, rng, 2);
    EXPECT_NEAR(comparison_residual(a, b, c), 0.0, 1e-12);
    const ManifoldPoint x = random_point(H, rng, 2), y = random_point(H, rng, 2), z = random_point(H, rng, 2);
    EXPECT_GE(comparison_residual(x, y, z), -1e-9);
  }
  // a=(1,0), b=(1,1), c=0: residual is coefficient - 2.
  const ManifoldPoint a = make_point(E, Vec{{1, 0}}), b = make_point(E, Vec{{1, 1}}), c = origin(E);
  EXPECT_NEAR(comparison_residual(a, b, c, 1.0), -1.0, 1e-14);
  EXPECT_NEAR(comparison_residual(a, b, c, 2.0), 0.0, 1e-14);
}

TEST(Manifold, GeodesicEndpointsAndMidpoint) {
  const auto H = ManifoldId::hyperboloid(2);
  std::mt19937_64 rng(4);
  const ManifoldPoint p = random_point(H, rng, 1), q = random_point(H, rng, 1);
  EXPECT_LE((geodesic(p, q, 0).coords - p.coords).norm(), 1e-12);
  EXPECT_LE((geodesic(p, q, 1).coords - q.coords).norm(), 1e-10);
  const ManifoldPoint mid = geodesic(p, q, 0.5);
  EXPECT_NEAR(dist(p, mid), dist(mid, q), 1e-10);
  EXPECT_THROW(dist(p, origin(ManifoldId::euclidean(2))), GeometryError);
}
