#include "hadprox/small_qp.hpp"
#include "hadprox/subsolver.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hadprox;

namespace {

double qp_objective(const MinimaxQp& qp, const Vec& v) {
  double t = -1e300;
  for (std::size_t j = 0; j < qp.piece_offset.size(); ++j) t = std::max(t, qp.piece_offset[j] + qp.piece_grad[j].dot(v));
  for (std::size_t i = 0; i < qp.cons_offset.size(); ++i) {
    if (qp.cons_offset[i] + qp.cons_grad[i].dot(v) > 1e-10) return 1e300;
  }
  return t + 0.5 * qp.M * (v - qp.center).squaredNorm();
}

SubproblemSpec make_spec(const VectorObjective& F, const ManifoldPoint& anchor, double lambda, InnerMethod method) {
  const GeneratorSet Z = GeneratorSet::orthant(F.m());
  InnerConfig in;
  in.method = method;
  return SubproblemSpec{std::cref(F), anchor, lambda, uniform_direction(Z), Z, in};
}

}  // namespace

TEST(SmallQp, MatchesGridOn2D) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int inst = 0; inst < 20; ++inst) {
    MinimaxQp qp;
    qp.M = 0.5 + u(rng) + 1;
    qp.center = Vec{{u(rng), u(rng)}};
    for (int j = 0; j < 3; ++j) {
      qp.piece_offset.push_back(u(rng));
      qp.piece_grad.push_back(Vec{{u(rng), u(rng)}});
    }
    // One constraint that keeps the origin strictly feasible.
    qp.cons_offset.push_back(-0.2);
    qp.cons_grad.push_back(Vec{{u(rng), u(rng)}});
    const MinimaxQpSolution s = solve_minimax_qp(qp);
    ASSERT_TRUE(s.feasible);
    EXPECT_NEAR(s.objective, qp_objective(qp, s.v), 1e-12);
    double best = 1e300;
    const double h = 5e-3;
    for (double x = -3; x <= 3; x += h) {
      for (double y = -3; y <= 3; y += h) best = std::min(best, qp_objective(qp, Vec{{x, y}}));
    }
    EXPECT_LE(s.objective, best + 1e-12);
    EXPECT_GE(s.objective, best - 0.1);
  }
}

TEST(SmallQp, KktMultipliers) {
  // |v| + (1/2)(v - 0.3)^2 is minimized at the kink v = 0.
  MinimaxQp qp;
  qp.M = 1;
  qp.center = Vec{{0.3}};
  qp.piece_offset = {0, 0};
  qp.piece_grad = {Vec{{1}}, Vec{{-1}}};
  const auto s = solve_minimax_qp(qp);
  EXPECT_NEAR(s.v[0], 0.0, 1e-14);
  EXPECT_NEAR(s.piece_multipliers[0] + s.piece_multipliers[1], 1.0, 1e-12);
  EXPECT_NEAR(s.piece_multipliers[0] - s.piece_multipliers[1], 0.3, 1e-12);
}

TEST(SmallQp, InfeasibleAndInvalid) {
  MinimaxQp qp;
  qp.center = Vec{{0.0}};
  qp.piece_offset = {0};
  qp.piece_grad = {Vec{{1}}};
  qp.cons_offset = {1, 1};
  qp.cons_grad = {Vec{{1}}, Vec{{-1}}};
  EXPECT_FALSE(solve_minimax_qp(qp).feasible);
  qp.M = 0;
  EXPECT_THROW(solve_minimax_qp(qp), std::invalid_argument);
}

TEST(Subsolver, ScalarQuadraticClosedForm) {
  // min x^2 + (lambda/2)(x - a)^2 over x^2 <= a^2: x = lambda a / (2 + lambda).
  const auto E = ManifoldId::euclidean(1);
  const VectorObjective F = builtin::scalar_quadratic(E);
  const ManifoldPoint a = make_point(E, Vec{{1.0}});
  const GeneratorSet Z = GeneratorSet::scalar();
  for (const auto method : {InnerMethod::kSqp, InnerMethod::kSubgradient, InnerMethod::kSoftmax}) {
    InnerConfig in;
    in.method = method;
    const SubproblemSpec spec{std::cref(F), a, 2.0, ScalarizationDirection(Vec{{1.0}}, Z), Z, in};
    const SubproblemResult r = solve_subproblem(spec);
    EXPECT_NEAR(r.point.coords[0], 0.5, method == InnerMethod::kSqp ? 1e-10 : 1e-4) << to_string(method);
    EXPECT_LE(r.feasibility_residual, 1e-10);
  }
}

TEST(Subsolver, MethodsAgree) {
  std::mt19937_64 rng(31);
  for (const auto m : {ManifoldId::euclidean(2), ManifoldId::hyperboloid(2)}) {
    for (int inst = 0; inst < 5; ++inst) {
      const VectorObjective F =
          builtin::squared_distances(m, {random_point(m, rng, 1), random_point(m, rng, 1), random_point(m, rng, 1)});
      const ManifoldPoint anchor = random_point(m, rng, 2);
      const SubproblemResult sqp = solve_subproblem(make_spec(F, anchor, 1.0, InnerMethod::kSqp));
      ASSERT_EQ(sqp.status, InnerStatus::kConverged) << m.name();
      EXPECT_LE(sqp.feasibility_residual, 0.0);
      for (const auto method : {InnerMethod::kSubgradient, InnerMethod::kSoftmax}) {
        const SubproblemSpec spec = make_spec(F, anchor, 1.0, method);
        const SubproblemResult r = solve_subproblem(spec);
        ASSERT_NE(r.status, InnerStatus::kFailed) << to_string(method);
        // The QP-based solver is never worse, and the others get close.
        EXPECT_LE(sqp.objective_value, r.objective_value + 1e-9) << to_string(method);
        EXPECT_NEAR(sqp.objective_value, r.objective_value, 1e-3) << to_string(method) << ' ' << m.name();
        EXPECT_LE(dist(sqp.point, r.point), 5e-2) << to_string(method) << ' ' << m.name();
      }
    }
  }
}

TEST(Subsolver, ResultIsAtLeastAsGoodAsAnchor) {
  std::mt19937_64 rng(4);
  const auto H = ManifoldId::hyperboloid(3);
  const VectorObjective F = builtin::squared_distances(H, {random_point(H, rng, 1), random_point(H, rng, 1)});
  const ManifoldPoint anchor = random_point(H, rng, 3);
  const SubproblemSpec spec = make_spec(F, anchor, 0.5, InnerMethod::kSqp);
  const SubproblemResult r = solve_subproblem(spec);
  EXPECT_LE(r.objective_value, prox_objective(anchor, spec));
  EXPECT_LE(feasibility_residual(r.point, spec), 0.0);
  EXPECT_NEAR(prox_objective(r.point, spec), r.objective_value, 1e-12);
}

TEST(Subsolver, ObserverSeesTrialPoints) {
  const auto E = ManifoldId::euclidean(2);
  const VectorObjective F = builtin::squared_distances(E, {make_point(E, Vec{{1, 0}}), make_point(E, Vec{{0, 1}})});
  const SubproblemSpec spec = make_spec(F, make_point(E, Vec{{2, 2}}), 1.0, InnerMethod::kSqp);
  int seen = 0;
  const SubproblemResult r = solve_subproblem(spec, [&](const InnerStep&) { ++seen; });
  EXPECT_GT(seen, 0);
  EXPECT_LE(seen, r.inner_iterations);
}

TEST(Subsolver, ConfigValidation) {
  InnerConfig in;
  EXPECT_NO_THROW(validate(in));
  in.max_iters = 0;
  EXPECT_THROW(validate(in), std::invalid_argument);
  in = {};
  in.tol_opt = -1;
  EXPECT_THROW(validate(in), std::invalid_argument);
  EXPECT_EQ(to_string(InnerMethod::kSqp), "sqp");
}
