#pragma once

#include "hadprox/cone.hpp"
#include "hadprox/manifold.hpp"
#include "hadprox/problem.hpp"

#include <functional>
#include <string>

namespace hadprox {

/// kSqp: prox-linear steps on a tangent-space QP model (default).
/// kSubgradient: diminishing-step subgradient with constraint switching.
/// kSoftmax: softmax-smoothed gradient descent with a shrinking temperature.
enum class InnerMethod { kSqp, kSubgradient, kSoftmax };
enum class InnerStatus { kConverged, kMaxIters, kFailed };

std::string to_string(InnerStatus s);
std::string to_string(InnerMethod m);

struct InnerConfig {
  int max_iters = 50000;
  double tol_opt = 1e-8;
  double tol_feas = 1e-10;
  /// Subgradient method only: alpha_t = step_constant / (lambda (t + 1)).
  double step_constant = 2.0;
  /// Number of most recent best-value improvements summed by the stop test.
  int window = 25;
  /// Subgradient method only: stop once the best value has not moved for
  /// this many iterations.
  int stall_iters = 5000;
  InnerMethod method = InnerMethod::kSqp;
};

void validate(const InnerConfig& cfg);

/// One inner iterate, for debug tracing.
struct InnerStep {
  int iteration;
  const ManifoldPoint& point;
  double phi;          // prox objective (without indicator)
  double feasibility;  // g_k at the point
  bool constraint_step;
};
using InnerObserver = std::function<void(const InnerStep&)>;

/// phi_k(p) = f_k(F(p)) + I_{Omega_k}(p) + (lambda/2) d^2(p, anchor).
struct SubproblemSpec {
  std::reference_wrapper<const VectorObjective> objective;
  ManifoldPoint anchor;
  double lambda;
  ScalarizationDirection direction;
  GeneratorSet Z;
  InnerConfig inner;
};

struct SubproblemResult {
  ManifoldPoint point;
  double objective_value;
  double feasibility_residual;
  double optimality_estimate;
  int inner_iterations;
  InnerStatus status;
};

/// g_k(p) = max_j <F(p) - F(anchor), z_j>; p is in Omega_k iff g_k(p) <= 0.
double feasibility_residual(const ManifoldPoint& p, const SubproblemSpec& spec);

/// f_k(F(p)) + (lambda/2) d^2(p, anchor).
double prox_objective(const ManifoldPoint& p, const SubproblemSpec& spec);

/// Norm of the Danskin subgradient of the prox objective at p,
/// w - lambda log(p, anchor).
double stationarity_residual(const ManifoldPoint& p, const SubproblemSpec& spec);

SubproblemResult solve_subproblem(const SubproblemSpec& spec, const InnerObserver& observer = {});

}  // namespace hadprox
