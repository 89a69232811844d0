#include "hadprox/proxpoint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace hadprox {

double LambdaSchedule::at(int k) const {
  if (values.empty()) throw std::invalid_argument("lambda schedule is empty");
  return values[static_cast<std::size_t>(std::min<int>(k, static_cast<int>(values.size()) - 1))];
}

Vec DirectionSchedule::at(int k, const GeneratorSet& Z) const {
  if (directions.empty()) return uniform_direction(Z).vec();
  if (!cyclic) return directions.front();
  return directions[static_cast<std::size_t>(k) % directions.size()];
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kStepConverged:
      return "step_converged";
    case RunStatus::kMaxOuter:
      return "max_outer";
    case RunStatus::kInnerFailure:
      return "inner_failure";
  }
  return "unknown";
}

void validate(const OuterConfig& cfg, const GeneratorSet& Z) {
  if (!(cfg.lambda.lambda_max > 0) || !std::isfinite(cfg.lambda.lambda_max)) {
    throw std::invalid_argument("lambda_max must be positive and finite");
  }
  if (cfg.lambda.values.empty()) throw std::invalid_argument("lambda schedule is empty");
  for (double l : cfg.lambda.values) {
    if (!(l > 0)) throw std::invalid_argument("lambda_k must be positive (got " + std::to_string(l) + ")");
    if (l > cfg.lambda.lambda_max) {
      throw std::invalid_argument("lambda_k exceeds lambda_max (schedule must be bounded)");
    }
  }
  for (const Vec& e : cfg.directions.directions) {
    const ScalarizationDirection dir(e, Z);
    if (!dir.is_unit(1e-9)) throw std::invalid_argument("scheduled direction e^k must have unit norm");
  }
  if (!(cfg.tol_step >= 0)) throw std::invalid_argument("tol_step must be nonnegative");
  if (cfg.max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");
  validate(cfg.inner);
}

SolveTrace run(const ProblemInstance& problem, const ManifoldPoint& p0, const OuterConfig& cfg,
               const InnerObserver& observer) {
  const VectorObjective& F = problem.objective;
  const GeneratorSet& Z = problem.Z;
  validate(cfg, Z);
  check_point(p0);
  if (!(p0.manifold == F.manifold())) throw GeometryError("start point is not on the objective's manifold");
  if (Z.m() != F.m()) throw ConeError("generator set dimension does not match objective");

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&] {
    if (!cfg.record_wall_clock) return 0.0;
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };

  SolveTrace trace;
  trace.manifold = F.manifold();
  trace.m = F.m();

  auto make_record = [&](int k, ManifoldPoint p) {
    IterationRecord r;
    r.k = k;
    r.values = F.eval(p);
    r.point = std::move(p);
    r.lambda = cfg.lambda.at(k);
    r.direction = cfg.directions.at(k, Z);
    r.f_value = scalarize(r.values, ScalarizationDirection(r.direction, Z), Z).value;
    return r;
  };

  trace.records.push_back(make_record(0, p0));
  for (int k = 0; k < cfg.max_outer; ++k) {
    const IterationRecord& cur = trace.records.back();
    const SubproblemSpec spec{F, cur.point, cur.lambda, ScalarizationDirection(cur.direction, Z), Z,
                              cfg.inner};
    const SubproblemResult res = solve_subproblem(spec, observer);
    if (res.status == InnerStatus::kFailed) {
      trace.status = RunStatus::kInnerFailure;
      return trace;
    }
    const double step = dist(res.point, cur.point);
    IterationRecord next = make_record(k + 1, res.point);
    next.step = step;
    next.feas_residual = res.feasibility_residual;
    next.inner_iterations = res.inner_iterations;
    next.inner_status = res.status;
    next.wall_ms = elapsed_ms();
    trace.records.push_back(std::move(next));
    if (step <= cfg.tol_step) {
      trace.status = RunStatus::kStepConverged;
      return trace;
    }
  }
  trace.status = RunStatus::kMaxOuter;
  return trace;
}

FejerReport fejer_audit(const SolveTrace& trace, const ProblemInstance& problem,
                        const ManifoldPoint& witness, double slack) {
  FejerReport report;
  if (trace.records.empty()) return report;
  const Vec Fw = problem.objective.eval(witness);
  report.witness_dominates = std::all_of(trace.records.begin(), trace.records.end(), [&](const auto& r) {
    return leq_C(Fw, r.values, problem.Z, Strictness::kNonStrict, slack);
  });
  const ManifoldPoint& p0 = trace.records.front().point;
  report.boundedness_bound = 2 * dist(p0, witness);
  double prev = dist(witness, p0);
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const ManifoldPoint& p = trace.records[k].point;
    const double d = dist(witness, p);
    if (d > prev + slack) {
      report.monotone = false;
      report.violations.push_back(static_cast<int>(k) - 1);
    }
    report.worst_increase = std::max(report.worst_increase, d - prev);
    report.max_distance_from_start = std::max(report.max_distance_from_start, dist(p0, p));
    prev = d;
  }
  report.bounded = report.max_distance_from_start <= report.boundedness_bound + slack;
  return report;
}

DescentReport descent_audit(const SolveTrace& trace, const GeneratorSet& Z, double cone_slack,
                            double lyapunov_slack) {
  DescentReport report;
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) {
    const IterationRecord& cur = trace.records[k];
    const IterationRecord& next = trace.records[k + 1];
    const double violation = max_generator_product(next.values - cur.values, Z).value;
    report.worst_descent_violation = std::max(report.worst_descent_violation, violation);
    if (violation > cone_slack) report.descent_failures.push_back(static_cast<int>(k));

    const ScalarizationDirection e(cur.direction, Z);
    const double d = dist(next.point, cur.point);
    const double lhs = scalarize(next.values, e, Z).value + 0.5 * cur.lambda * d * d;
    const double rhs = scalarize(cur.values, e, Z).value;
    report.worst_lyapunov_violation = std::max(report.worst_lyapunov_violation, lhs - rhs);
    if (lhs > rhs + lyapunov_slack) report.lyapunov_failures.push_back(static_cast<int>(k));
  }
  return report;
}

}  // namespace hadprox
