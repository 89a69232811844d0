#pragma once

#include "hadprox/cone.hpp"
#include "hadprox/manifold.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hadprox {

class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using ValueOracle = std::function<Vec(const ManifoldPoint&)>;
using GradientOracle = std::function<std::vector<TangentVector>(const ManifoldPoint&)>;

/// F: M -> R^m with value and Riemannian-gradient oracles. When no gradient
/// oracle is supplied, gradients come from central geodesic differences
/// (accuracy ~1e-7 relative at best).
class VectorObjective {
 public:
  VectorObjective(std::string name, ManifoldId manifold, int m, ValueOracle value,
                  GradientOracle gradient, bool convex_declared);

  const std::string& name() const { return name_; }
  const ManifoldId& manifold() const { return manifold_; }
  int m() const { return m_; }
  bool convex_declared() const { return convex_declared_; }
  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }

  Vec eval(const ManifoldPoint& p) const;
  std::vector<TangentVector> gradients(const ManifoldPoint& p) const;

 private:
  std::string name_;
  ManifoldId manifold_;
  int m_;
  ValueOracle value_;
  GradientOracle gradient_;
  bool convex_declared_;
};

Vec eval_objective(const VectorObjective& F, const ManifoldPoint& p);
std::vector<TangentVector> objective_gradients(const VectorObjective& F, const ManifoldPoint& p);

/// Orthonormal basis of T_pM (Minkowski Gram-Schmidt on the hyperboloid).
std::vector<TangentVector> tangent_basis(const ManifoldPoint& p);

/// Danskin subgradient of p -> f_e(F(p)): (1/<e,z*>) sum_i z*_i grad F_i(p),
/// with z* the active generator (lowest index on ties).
TangentVector scalarized_subgradient(const VectorObjective& F, const ManifoldPoint& p,
                                     const ScalarizationDirection& e, const GeneratorSet& Z);

struct ConvexityReport {
  int samples = 0;
  int violations = 0;
  double worst_violation = 0;  // max_j -<rhs - lhs, z_j>; <= slack when convex
  std::optional<ManifoldPoint> witness_p;
  std::optional<ManifoldPoint> witness_q;
  double witness_t = 0;
  bool passed() const { return violations == 0; }
};

/// Samples p, q uniformly in a coordinate box of the given radius and t in
/// [0,1]; checks F(gamma(t)) <=_C (1-t)F(p) + tF(q) with slack 1e-8.
ConvexityReport c_convexity_audit(const VectorObjective& F, const GeneratorSet& Z, int samples,
                                  std::uint64_t seed, double radius = 2.0);

struct ProblemInstance {
  VectorObjective objective;
  GeneratorSet Z;
  std::vector<ManifoldPoint> reference_solutions;
  std::optional<ManifoldPoint> a2_witness;
  /// Distance to the known weakly efficient set, when one is known.
  std::function<double(const ManifoldPoint&)> distance_to_efficient_set;
};

/// Distance from p to the geodesic segment [a, b] (golden-section search on
/// the parameter; the distance along a geodesic is convex on Hadamard spaces).
double distance_to_geodesic_segment(const ManifoldPoint& p, const ManifoldPoint& a,
                                    const ManifoldPoint& b);

/// Euclidean distance from x to conv{anchors} (projected gradient on the simplex).
double distance_to_convex_hull(const Vec& x, const std::vector<Vec>& anchors);

namespace builtin {

/// F_i(p) = d^2(p, a_i). Euclidean: ||p - a_i||^2. C-convex for the orthant.
VectorObjective squared_distances(const ManifoldId& m, std::vector<ManifoldPoint> anchors);
/// m = 1, F(p) = d^2(p, origin) (||p||^2 on R^n).
VectorObjective scalar_quadratic(const ManifoldId& m);
/// (d^2(p, o), -d^2(p, o)): not C-convex for the orthant.
VectorObjective concave_pair(const ManifoldId& m);
/// G_i(p) = w_i d(p, o); weak sharp at o.
VectorObjective weighted_norms(const ManifoldId& m, const std::vector<double>& weights);
/// G_i(p) = w_i d^2(p, o); not weak sharp at o.
VectorObjective weighted_sq_norms(const ManifoldId& m, const std::vector<double>& weights);

/// Orthant-ordered anchor problem with its known efficient set: the anchor
/// itself, the geodesic segment for two anchors, the convex hull on R^n.
ProblemInstance anchor_problem(const ManifoldId& m, std::vector<ManifoldPoint> anchors);
ProblemInstance scalar_quadratic_problem(const ManifoldId& m);
ProblemInstance concave_pair_problem(const ManifoldId& m);

}  // namespace builtin

}  // namespace hadprox
