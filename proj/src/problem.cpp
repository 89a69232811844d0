#include "hadprox/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hadprox {

namespace {

constexpr double kFiniteDifferenceStep = 1e-6;
constexpr double kConvexitySlack = 1e-8;

void check_on(const VectorObjective& F, const ManifoldPoint& p) {
  if (!(p.manifold == F.manifold())) {
    throw GeometryError("manifold mismatch: objective '" + F.name() + "' lives on " +
                        F.manifold().name() + ", point on " + p.manifold.name());
  }
}

// Euclidean projection onto the probability simplex.
Vec project_simplex(const Vec& v) {
  Vec u = v;
  std::sort(u.data(), u.data() + u.size(), std::greater<>());
  double cumsum = 0;
  double theta = 0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    cumsum += u(i);
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u(i) - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

}  // namespace

VectorObjective::VectorObjective(std::string name, ManifoldId manifold, int m, ValueOracle value,
                                 GradientOracle gradient, bool convex_declared)
    : name_(std::move(name)),
      manifold_(manifold),
      m_(m),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      convex_declared_(convex_declared) {
  if (m_ < 1) throw ProblemError("objective must have at least one component");
  if (!value_) throw ProblemError("objective needs a value oracle");
}

Vec VectorObjective::eval(const ManifoldPoint& p) const {
  check_on(*this, p);
  Vec y = value_(p);
  if (y.size() != m_) throw ProblemError("value oracle returned the wrong number of components");
  if (!y.allFinite()) throw ProblemError("objective '" + name_ + "' returned a non-finite value");
  return y;
}

std::vector<TangentVector> VectorObjective::gradients(const ManifoldPoint& p) const {
  check_on(*this, p);
  if (gradient_) {
    auto g = gradient_(p);
    if (static_cast<int>(g.size()) != m_) {
      throw ProblemError("gradient oracle returned the wrong number of components");
    }
    return g;
  }
  std::vector<TangentVector> grads(m_, zero_tangent(p));
  const double h = kFiniteDifferenceStep;
  for (const TangentVector& b : tangent_basis(p)) {
    const Vec fp = eval(exp(scale(b, h)));
    const Vec fm = eval(exp(scale(b, -h)));
    for (int i = 0; i < m_; ++i) grads[i].coords += ((fp(i) - fm(i)) / (2 * h)) * b.coords;
  }
  return grads;
}

Vec eval_objective(const VectorObjective& F, const ManifoldPoint& p) { return F.eval(p); }

std::vector<TangentVector> objective_gradients(const VectorObjective& F, const ManifoldPoint& p) {
  return F.gradients(p);
}

std::vector<TangentVector> tangent_basis(const ManifoldPoint& p) {
  std::vector<TangentVector> basis;
  const int n = p.manifold.dim;
  const int off = p.manifold.ambient_dim() - n;
  for (int i = 0; i < n; ++i) {
    TangentVector v = project_tangent(p, Vec::Unit(p.manifold.ambient_dim(), off + i));
    for (const TangentVector& b : basis) v = add(v, scale(b, -inner(v, b)));
    basis.push_back(scale(v, 1.0 / norm(v)));
  }
  return basis;
}

TangentVector scalarized_subgradient(const VectorObjective& F, const ManifoldPoint& p,
                                     const ScalarizationDirection& e, const GeneratorSet& Z) {
  const Vec y = F.eval(p);
  const Scalarized s = scalarize(y, e, Z);
  const Vec& z = Z[s.active];
  const auto grads = F.gradients(p);
  TangentVector w = zero_tangent(p);
  for (int i = 0; i < F.m(); ++i) w.coords += z(i) * grads[i].coords;
  return scale(w, 1.0 / e.weights()[s.active]);
}

ConvexityReport c_convexity_audit(const VectorObjective& F, const GeneratorSet& Z, int samples,
                                  std::uint64_t seed, double radius) {
  if (samples < 1) throw ProblemError("convexity audit needs at least one sample");
  if (Z.m() != F.m()) throw ConeError("generator set dimension does not match objective");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ConvexityReport report;
  report.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const ManifoldPoint p = random_point(F.manifold(), rng, radius);
    const ManifoldPoint q = random_point(F.manifold(), rng, radius);
    const double t = unit(rng);
    const Vec lhs = F.eval(geodesic(p, q, t));
    const Vec rhs = (1 - t) * F.eval(p) + t * F.eval(q);
    const double violation = max_generator_product(lhs - rhs, Z).value;
    if (violation > kConvexitySlack) ++report.violations;
    if (s == 0 || violation > report.worst_violation) {
      report.worst_violation = violation;
      report.witness_p = p;
      report.witness_q = q;
      report.witness_t = t;
    }
  }
  return report;
}

double distance_to_geodesic_segment(const ManifoldPoint& p, const ManifoldPoint& a,
                                    const ManifoldPoint& b) {
  const TangentVector ab = log(a, b);
  auto at = [&](double t) { return dist(p, exp(scale(ab, t))); };
  const double invphi = (std::sqrt(5.0) - 1) / 2;
  double lo = 0, hi = 1;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = at(x1), f2 = at(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = at(x2);
    }
  }
  return std::min({f1, f2, at(0.0), at(1.0)});
}

double distance_to_convex_hull(const Vec& x, const std::vector<Vec>& anchors) {
  const auto k = static_cast<Eigen::Index>(anchors.size());
  Eigen::MatrixXd A(x.size(), k);
  for (Eigen::Index j = 0; j < k; ++j) A.col(j) = anchors[j];
  const Eigen::MatrixXd H = A.transpose() * A;
  const double L = std::max(H.operatorNorm(), 1e-300);
  Vec w = Vec::Constant(k, 1.0 / static_cast<double>(k));
  for (int it = 0; it < 20000; ++it) {
    const Vec g = A.transpose() * (A * w - x);
    const Vec next = project_simplex(w - g / L);
    if ((next - w).lpNorm<Eigen::Infinity>() < 1e-15) {
      w = next;
      break;
    }
    w = next;
  }
  return (A * w - x).norm();
}

namespace builtin {

VectorObjective squared_distances(const ManifoldId& m, std::vector<ManifoldPoint> anchors) {
  if (anchors.empty()) throw ProblemError("squared_distances needs at least one anchor");
  for (const auto& a : anchors) {
    check_point(a);
    if (!(a.manifold == m)) throw GeometryError("anchor is not on " + m.name());
  }
  const int k = static_cast<int>(anchors.size());
  auto value = [anchors](const ManifoldPoint& p) {
    Vec y(anchors.size());
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      const double d = dist(p, anchors[i]);
      y(static_cast<Eigen::Index>(i)) = d * d;
    }
    return y;
  };
  auto gradient = [anchors](const ManifoldPoint& p) {
    std::vector<TangentVector> g;
    g.reserve(anchors.size());
    for (const auto& a : anchors) g.push_back(grad_sq_dist(a, p));
    return g;
  };
  return VectorObjective("squared_distances", m, k, value, gradient, true);
}

VectorObjective scalar_quadratic(const ManifoldId& m) {
  const ManifoldPoint o = origin(m);
  return VectorObjective(
      "scalar_quadratic", m, 1, [o](const ManifoldPoint& p) {
        const double d = dist(p, o);
        return Vec::Constant(1, d * d);
      },
      [o](const ManifoldPoint& p) { return std::vector<TangentVector>{grad_sq_dist(o, p)}; },
      true);
}

VectorObjective concave_pair(const ManifoldId& m) {
  const ManifoldPoint o = origin(m);
  return VectorObjective(
      "concave_pair", m, 2,
      [o](const ManifoldPoint& p) {
        const double d2 = std::pow(dist(p, o), 2);
        Vec y(2);
        y << d2, -d2;
        return y;
      },
      [o](const ManifoldPoint& p) {
        const TangentVector g = grad_sq_dist(o, p);
        return std::vector<TangentVector>{g, scale(g, -1.0)};
      },
      false);
}

VectorObjective weighted_norms(const ManifoldId& m, const std::vector<double>& weights) {
  const ManifoldPoint o = origin(m);
  const Vec w = Eigen::Map<const Vec>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return VectorObjective(
      "weighted_norms", m, static_cast<int>(weights.size()),
      [o, w](const ManifoldPoint& p) -> Vec { return dist(p, o) * w; },
      [o, w](const ManifoldPoint& p) {
        const double d = dist(p, o);
        // Unit radial direction; the subgradient set at o contains 0.
        const TangentVector u = d < kSmallVector ? zero_tangent(p) : scale(log(p, o), -1.0 / d);
        std::vector<TangentVector> g;
        for (Eigen::Index i = 0; i < w.size(); ++i) g.push_back(scale(u, w(i)));
        return g;
      },
      true);
}

VectorObjective weighted_sq_norms(const ManifoldId& m, const std::vector<double>& weights) {
  const ManifoldPoint o = origin(m);
  const Vec w = Eigen::Map<const Vec>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return VectorObjective(
      "weighted_sq_norms", m, static_cast<int>(weights.size()),
      [o, w](const ManifoldPoint& p) -> Vec { return std::pow(dist(p, o), 2) * w; },
      [o, w](const ManifoldPoint& p) {
        const TangentVector g = grad_sq_dist(o, p);
        std::vector<TangentVector> out;
        for (Eigen::Index i = 0; i < w.size(); ++i) out.push_back(scale(g, w(i)));
        return out;
      },
      true);
}

ProblemInstance anchor_problem(const ManifoldId& m, std::vector<ManifoldPoint> anchors) {
  VectorObjective F = squared_distances(m, anchors);
  const int k = F.m();
  std::function<double(const ManifoldPoint&)> distance;
  if (k == 1) {
    distance = [a = anchors[0]](const ManifoldPoint& p) { return dist(p, a); };
  } else if (k == 2) {
    distance = [a = anchors[0], b = anchors[1]](const ManifoldPoint& p) {
      return distance_to_geodesic_segment(p, a, b);
    };
  } else if (m.kind == Geometry::kEuclidean) {
    std::vector<Vec> coords;
    for (const auto& a : anchors) coords.push_back(a.coords);
    distance = [coords](const ManifoldPoint& p) { return distance_to_convex_hull(p.coords, coords); };
  }
  return ProblemInstance{std::move(F), GeneratorSet::orthant(k), anchors, std::nullopt,
                         std::move(distance)};
}

ProblemInstance scalar_quadratic_problem(const ManifoldId& m) {
  const ManifoldPoint o = origin(m);
  return ProblemInstance{scalar_quadratic(m), GeneratorSet::scalar(), {o}, o,
                         [o](const ManifoldPoint& p) { return dist(p, o); }};
}

ProblemInstance concave_pair_problem(const ManifoldId& m) {
  return ProblemInstance{concave_pair(m), GeneratorSet::orthant(2), {}, std::nullopt, {}};
}

}  // namespace builtin

}  // namespace hadprox
