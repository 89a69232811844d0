#pragma once

#include "hadprox/cone.hpp"
#include "hadprox/manifold.hpp"
#include "hadprox/problem.hpp"
#include "hadprox/subsolver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hadprox {

/// lambda_k = values[min(k, size-1)], each in (0, lambda_max].
struct LambdaSchedule {
  std::vector<double> values{1.0};
  double lambda_max = 1e6;

  static LambdaSchedule constant(double lambda, double lambda_max = 1e6) {
    return {{lambda}, lambda_max};
  }
  double at(int k) const;
};

/// Fixed e, or a list cycled with period size(). Empty means the uniform
/// direction (1,...,1)/sqrt(m).
struct DirectionSchedule {
  bool cyclic = false;
  std::vector<Vec> directions;

  Vec at(int k, const GeneratorSet& Z) const;
};

struct OuterConfig {
  LambdaSchedule lambda;
  DirectionSchedule directions;
  double tol_step = 1e-7;
  int max_outer = 500;
  std::uint64_t seed = 0;
  InnerConfig inner;
  /// Wall-clock timings are nondeterministic; when off the trace records 0.
  bool record_wall_clock = false;
};

/// Throws std::invalid_argument naming the violated requirement.
void validate(const OuterConfig& cfg, const GeneratorSet& Z);

struct IterationRecord {
  int k = 0;
  ManifoldPoint point;
  Vec values;              // F(p^k)
  double f_value = 0;      // f_k(F(p^k))
  double step = 0;         // d(p^k, p^{k-1}); 0 for k = 0
  double feas_residual = 0;
  int inner_iterations = 0;
  InnerStatus inner_status = InnerStatus::kConverged;
  double wall_ms = 0;
  double lambda = 0;       // lambda_k used to produce p^{k+1}
  Vec direction;           // e^k
};

enum class RunStatus { kStepConverged, kMaxOuter, kInnerFailure };
std::string to_string(RunStatus s);

struct SolveTrace {
  ManifoldId manifold;
  int m = 0;
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::kMaxOuter;

  int iterations() const { return static_cast<int>(records.size()) - 1; }
  const IterationRecord& last() const { return records.back(); }
};

SolveTrace run(const ProblemInstance& problem, const ManifoldPoint& p0, const OuterConfig& cfg,
               const InnerObserver& observer = {});

struct FejerReport {
  bool witness_dominates = false;  // F(w) <=_C F(p^k) for every k
  bool monotone = true;            // d(w, p^{k+1}) <= d(w, p^k) + slack for every k
  std::vector<int> violations;     // offending k (transition k -> k+1)
  double worst_increase = 0;
  double max_distance_from_start = 0;
  double boundedness_bound = 0;    // 2 d(p^0, w)
  bool bounded = true;
  /// Hard failure only when the witness is verified to dominate the run.
  bool hard_failure() const { return witness_dominates && (!monotone || !bounded); }
  bool passed() const { return !hard_failure(); }
};

FejerReport fejer_audit(const SolveTrace& trace, const ProblemInstance& problem,
                        const ManifoldPoint& witness, double slack);

struct DescentReport {
  std::vector<int> descent_failures;    // F(p^{k+1}) not <=_C F(p^k)
  std::vector<int> lyapunov_failures;   // f_k(F(p^{k+1})) + lambda_k/2 d^2 > f_k(F(p^k))
  double worst_descent_violation = 0;
  double worst_lyapunov_violation = 0;
  bool passed() const { return descent_failures.empty() && lyapunov_failures.empty(); }
};

DescentReport descent_audit(const SolveTrace& trace, const GeneratorSet& Z,
                            double cone_slack = 1e-10, double lyapunov_slack = 1e-10);

}  // namespace hadprox
