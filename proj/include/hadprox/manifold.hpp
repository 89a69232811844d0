#pragma once

#include <Eigen/Dense>

#include <random>
#include <stdexcept>
#include <string>

namespace hadprox {

using Vec = Eigen::VectorXd;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Geometry { kEuclidean, kHyperboloid };

/// Intrinsic dimension plus model. Hyperboloid points live in R^{n+1}.
struct ManifoldId {
  Geometry kind = Geometry::kEuclidean;
  int dim = 1;

  static ManifoldId euclidean(int n);
  static ManifoldId hyperboloid(int n);

  int ambient_dim() const { return kind == Geometry::kEuclidean ? dim : dim + 1; }
  std::string name() const;

  friend bool operator==(const ManifoldId&, const ManifoldId&) = default;
};

struct ManifoldPoint {
  ManifoldId manifold;
  Vec coords;
};

struct TangentVector {
  ManifoldPoint base;
  Vec coords;
};

// On-manifold / in-tangent tolerances; on the hyperboloid they scale with
// max(1, |p|^2) and max(1, |p||v|).
inline constexpr double kPointTol = 1e-9;
inline constexpr double kTangentTol = 1e-9;
// Below this norm exp returns the base point and log returns zero.
inline constexpr double kSmallVector = 1e-12;

/// Minkowski product -x0*y0 + sum_i xi*yi.
double minkowski(const Vec& x, const Vec& y);

/// Validates coordinates against the manifold and wraps them.
ManifoldPoint make_point(const ManifoldId& m, Vec coords);
/// Hyperboloid: lifts spatial coordinates x to (sqrt(1+|x|^2), x).
/// Euclidean: identity.
ManifoldPoint lift_point(const ManifoldId& m, const Vec& spatial);
ManifoldPoint origin(const ManifoldId& m);

/// Validates v as a tangent at p.
TangentVector make_tangent(const ManifoldPoint& p, Vec coords);
/// Orthogonal (Minkowski) projection of an ambient vector onto T_pM.
TangentVector project_tangent(const ManifoldPoint& p, const Vec& ambient);
TangentVector zero_tangent(const ManifoldPoint& p);

void check_point(const ManifoldPoint& p);
void check_same_manifold(const ManifoldPoint& p, const ManifoldPoint& q);

double inner(const TangentVector& u, const TangentVector& v);
double norm(const TangentVector& v);

double dist(const ManifoldPoint& p, const ManifoldPoint& q);
ManifoldPoint exp(const TangentVector& v);
TangentVector log(const ManifoldPoint& p, const ManifoldPoint& q);

/// Riemannian gradient at p of d^2(q, .), i.e. -2 log(p, q).
TangentVector grad_sq_dist(const ManifoldPoint& q, const ManifoldPoint& p);

/// d^2(p1,p2) - [d^2(p1,p3) + d^2(p3,p2) - c <log(p3,p1), log(p3,p2)>].
/// Nonnegative on Hadamard manifolds for c = 2; zero on flat space.
double comparison_residual(const ManifoldPoint& p1, const ManifoldPoint& p2,
                           const ManifoldPoint& p3, double inner_coefficient = 2.0);

/// Point at parameter t on the geodesic from p (t=0) to q (t=1).
ManifoldPoint geodesic(const ManifoldPoint& p, const ManifoldPoint& q, double t);

TangentVector scale(const TangentVector& v, double a);
TangentVector add(const TangentVector& u, const TangentVector& v);

/// Spatial coordinates uniform in [-radius, radius]^n, lifted onto M.
ManifoldPoint random_point(const ManifoldId& m, std::mt19937_64& rng, double radius);
/// Tangent at p with Gaussian spatial direction, rescaled to the given norm.
TangentVector random_tangent(const ManifoldPoint& p, std::mt19937_64& rng, double length);

}  // namespace hadprox
