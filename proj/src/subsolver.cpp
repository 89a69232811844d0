#include "hadprox/subsolver.hpp"

#include "hadprox/small_qp.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>

namespace hadprox {

namespace {

struct Evaluation {
  Vec values;
  double phi;
  double feasibility;
  std::size_t feasibility_active;
};

class Subproblem {
 public:
  explicit Subproblem(const SubproblemSpec& spec)
      : spec_(spec), F_(spec.objective.get()), anchor_values_(F_.eval(spec.anchor)) {}

  Evaluation evaluate(const ManifoldPoint& p) const {
    Vec y = F_.eval(p);
    const Scalarized g = max_generator_product(y - anchor_values_, spec_.Z);
    const double d = dist(p, spec_.anchor);
    const double phi = scalarize(y, spec_.direction, spec_.Z).value + 0.5 * spec_.lambda * d * d;
    return {std::move(y), phi, g.value, g.active};
  }

  // Danskin subgradient of the constraint function g_k.
  TangentVector constraint_direction(const ManifoldPoint& p, std::size_t active) const {
    const auto grads = F_.gradients(p);
    const Vec& z = spec_.Z[active];
    TangentVector d = zero_tangent(p);
    for (int i = 0; i < F_.m(); ++i) d.coords += z(i) * grads[i].coords;
    return d;
  }

  // Subgradient of the prox objective: w - lambda log(p, anchor).
  TangentVector objective_direction(const ManifoldPoint& p) const {
    const TangentVector w = scalarized_subgradient(F_, p, spec_.direction, spec_.Z);
    return add(w, scale(log(p, spec_.anchor), -spec_.lambda));
  }

  // Gradient of the softmax-smoothed prox objective at temperature mu.
  std::pair<double, TangentVector> smoothed(const ManifoldPoint& p, double mu) const {
    const Vec y = F_.eval(p);
    const auto& Z = spec_.Z;
    Vec s(static_cast<Eigen::Index>(Z.size()));
    for (std::size_t j = 0; j < Z.size(); ++j) {
      s(static_cast<Eigen::Index>(j)) = y.dot(Z[j]) / spec_.direction.weights()[j];
    }
    const double top = s.maxCoeff();
    const Vec weights = ((s.array() - top) / mu).exp().matrix();
    const double total = weights.sum();
    const double d = dist(p, spec_.anchor);
    const double value = top + mu * std::log(total) + 0.5 * spec_.lambda * d * d;

    const auto grads = F_.gradients(p);
    TangentVector g = scale(log(p, spec_.anchor), -spec_.lambda);
    for (std::size_t j = 0; j < Z.size(); ++j) {
      const double pj = weights(static_cast<Eigen::Index>(j)) / total / spec_.direction.weights()[j];
      for (int i = 0; i < F_.m(); ++i) g.coords += pj * Z[j](i) * grads[i].coords;
    }
    return {value, g};
  }

  const SubproblemSpec& spec() const { return spec_; }

 private:
  const SubproblemSpec& spec_;
  const VectorObjective& F_;
  Vec anchor_values_;
};

void check_spec(const SubproblemSpec& spec) {
  validate(spec.inner);
  if (!(spec.lambda > 0) || !std::isfinite(spec.lambda)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  check_point(spec.anchor);
  if (!(spec.anchor.manifold == spec.objective.get().manifold())) {
    throw GeometryError("anchor is not on the objective's manifold");
  }
  if (spec.Z.m() != spec.objective.get().m()) {
    throw ConeError("generator set dimension does not match objective");
  }
}

SubproblemResult finish(const Subproblem& sub, const ManifoldPoint& best, const Evaluation& eval,
                        int iterations, InnerStatus status) {
  const double opt = stationarity_residual(best, sub.spec());
  return {best, eval.phi, std::max(0.0, eval.feasibility), opt, iterations, status};
}

SubproblemResult solve_subgradient(const Subproblem& sub, const InnerObserver& observer) {
  const SubproblemSpec& spec = sub.spec();
  const InnerConfig& cfg = spec.inner;

  ManifoldPoint q = spec.anchor;
  ManifoldPoint best = spec.anchor;
  Evaluation best_eval = sub.evaluate(spec.anchor);
  std::deque<double> improvements;
  int last_improvement = 0;

  for (int t = 0; t < cfg.max_iters; ++t) {
    const Evaluation e = sub.evaluate(q);
    const bool infeasible = e.feasibility > cfg.tol_feas;
    if (!infeasible && e.phi < best_eval.phi) {
      improvements.push_back(best_eval.phi - e.phi);
      if (static_cast<int>(improvements.size()) > cfg.window) improvements.pop_front();
      best = q;
      best_eval = e;
      last_improvement = t;
    }
    if (observer) observer(InnerStep{t, q, e.phi, e.feasibility, infeasible});

    if (static_cast<int>(improvements.size()) == cfg.window) {
      const double total = std::accumulate(improvements.begin(), improvements.end(), 0.0);
      if (total < cfg.tol_opt * (1 + std::abs(best_eval.phi))) {
        return finish(sub, best, best_eval, t + 1, InnerStatus::kConverged);
      }
    }
    if (t - last_improvement >= cfg.stall_iters) {
      return finish(sub, best, best_eval, t + 1, InnerStatus::kConverged);
    }

    const TangentVector dir =
        infeasible ? sub.constraint_direction(q, e.feasibility_active) : sub.objective_direction(q);
    if (norm(dir) == 0) {
      // Exact stationarity (objective) or a constraint with no descent direction.
      return finish(sub, best, best_eval, t + 1, InnerStatus::kConverged);
    }
    const double alpha = cfg.step_constant / (spec.lambda * (t + 1));
    q = exp(scale(dir, -alpha));
  }
  return finish(sub, best, best_eval, cfg.max_iters, InnerStatus::kMaxIters);
}

SubproblemResult solve_softmax(const Subproblem& sub, const InnerObserver& observer) {
  const SubproblemSpec& spec = sub.spec();
  const InnerConfig& cfg = spec.inner;

  ManifoldPoint q = spec.anchor;
  ManifoldPoint best = spec.anchor;
  Evaluation best_eval = sub.evaluate(spec.anchor);
  int iterations = 0;

  for (double mu = 1.0; mu > 1e-12 && iterations < cfg.max_iters; mu *= 0.5) {
    for (int it = 0; it < 500 && iterations < cfg.max_iters; ++it, ++iterations) {
      auto [value, grad] = sub.smoothed(q, mu);
      const double gnorm2 = inner(grad, grad);
      if (std::sqrt(gnorm2) <= mu) break;
      double step = 1.0 / spec.lambda;
      bool moved = false;
      while (step > 1e-16) {
        ManifoldPoint trial = exp(scale(grad, -step));
        const Evaluation te = sub.evaluate(trial);
        if (te.feasibility <= cfg.tol_feas &&
            sub.smoothed(trial, mu).first <= value - 1e-4 * step * gnorm2) {
          q = std::move(trial);
          if (te.phi < best_eval.phi) {
            best = q;
            best_eval = te;
          }
          if (observer) observer(InnerStep{iterations, q, te.phi, te.feasibility, false});
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
  }
  const InnerStatus status =
      iterations >= cfg.max_iters ? InnerStatus::kMaxIters : InnerStatus::kConverged;
  return finish(sub, best, best_eval, iterations, status);
}

// Tangent-space model at q, in an orthonormal basis of T_q M:
//   pieces       <F(q), z_j>/w_j + <grad_j, v>
//   constraints  <F(q) - F(anchor), z_i> + shift_i + <grad_i, v> <= 0
//   prox term    (lambda/2)|v - log(q, anchor)|^2 + (L/2)|v|^2
// Trial points that leave Omega_k get a second-order correction: the observed
// nonlinearity of each constraint is added as a shift and the QP is re-solved.
SubproblemResult solve_sqp(const Subproblem& sub, const InnerObserver& observer) {
  const SubproblemSpec& spec = sub.spec();
  const InnerConfig& cfg = spec.inner;
  const VectorObjective& F = spec.objective.get();
  const GeneratorSet& Z = spec.Z;
  const std::size_t J = Z.size();
  const std::vector<double>& w = spec.direction.weights();
  const Vec anchor_values = F.eval(spec.anchor);
  constexpr int kCorrections = 6;
  // Accepted points satisfy g_k <= 0 exactly; margin pads corrected constraints.
  const double margin = 1e-15 * (1 + anchor_values.cwiseAbs().maxCoeff());
  constexpr double kArmijo = 1e-4;

  ManifoldPoint q = spec.anchor;
  Evaluation e = sub.evaluate(q);
  double L = spec.lambda;
  std::deque<double> improvements;
  int iterations = 0;

  while (iterations < cfg.max_iters) {
    const std::vector<TangentVector> basis = tangent_basis(q);
    const auto n = static_cast<Eigen::Index>(basis.size());
    const auto grads = F.gradients(q);
    std::vector<Vec> G(grads.size(), Vec::Zero(n));
    for (std::size_t i = 0; i < grads.size(); ++i) {
      for (Eigen::Index k = 0; k < n; ++k) G[i](k) = inner(grads[i], basis[static_cast<std::size_t>(k)]);
    }
    const TangentVector to_anchor = log(q, spec.anchor);
    Vec b(n);
    for (Eigen::Index k = 0; k < n; ++k) b(k) = inner(to_anchor, basis[static_cast<std::size_t>(k)]);

    MinimaxQp qp;
    for (std::size_t j = 0; j < J; ++j) {
      Vec gz = Vec::Zero(n);
      for (std::size_t i = 0; i < G.size(); ++i) gz += Z[j](static_cast<Eigen::Index>(i)) * G[i];
      qp.piece_offset.push_back(e.values.dot(Z[j]) / w[j]);
      qp.piece_grad.push_back(gz / w[j]);
      qp.cons_offset.push_back((e.values - anchor_values).dot(Z[j]));
      qp.cons_grad.push_back(gz);
    }
    const std::vector<double> base_offset = qp.cons_offset;
    const double model_at_q = e.phi;

    bool accepted = false;
    std::vector<double> shift(J, 0.0);
    for (int c = 0; c < kCorrections && iterations < cfg.max_iters; ++c) {
      qp.M = spec.lambda + L;
      qp.center = (spec.lambda / qp.M) * b;
      for (std::size_t j = 0; j < J; ++j) qp.cons_offset[j] = base_offset[j] + shift[j];
      const MinimaxQpSolution sol = solve_minimax_qp(qp);
      ++iterations;
      if (!sol.feasible) break;
      if (c == 0 && sol.v.norm() <= 1e-15 * (1 + q.coords.norm())) {
        return finish(sub, q, e, iterations, InnerStatus::kConverged);
      }
      const double model = sol.t + 0.5 * spec.lambda * (sol.v - b).squaredNorm() +
                           0.5 * L * sol.v.squaredNorm();
      TangentVector step = zero_tangent(q);
      for (Eigen::Index k = 0; k < n; ++k) step.coords += sol.v(k) * basis[static_cast<std::size_t>(k)].coords;
      std::optional<ManifoldPoint> landed;
      std::optional<Evaluation> evaluated;
      try {
        landed = exp(step);
        evaluated = sub.evaluate(*landed);
      } catch (const GeometryError&) {
        break;  // step too long to represent; damp harder
      } catch (const ProblemError&) {
        break;
      }
      ManifoldPoint trial = std::move(*landed);
      const Evaluation& te = *evaluated;
      if (observer) observer(InnerStep{iterations, trial, te.phi, te.feasibility, c > 0});
      if (te.feasibility > 0) {
        for (std::size_t j = 0; j < J; ++j) {
          const double actual = (te.values - anchor_values).dot(Z[j]);
          const double linear = base_offset[j] + qp.cons_grad[j].dot(sol.v);
          shift[j] = std::max(shift[j], actual - linear + margin);
        }
        continue;
      }
      const double predicted = std::max(0.0, model_at_q - model);
      if (te.phi < e.phi && te.phi <= e.phi - kArmijo * predicted) {
        improvements.push_back(e.phi - te.phi);
        if (static_cast<int>(improvements.size()) > cfg.window) improvements.pop_front();
        q = std::move(trial);
        e = te;
        accepted = true;
      }
      break;
    }

    if (accepted) {
      L = std::max(0.5 * L, 1e-12 * spec.lambda);
      if (static_cast<int>(improvements.size()) == cfg.window) {
        const double total = std::accumulate(improvements.begin(), improvements.end(), 0.0);
        if (total < cfg.tol_opt * (1 + std::abs(e.phi))) {
          return finish(sub, q, e, iterations, InnerStatus::kConverged);
        }
      }
    } else {
      L *= 4;
      if (L > 1e16 * spec.lambda) return finish(sub, q, e, iterations, InnerStatus::kConverged);
    }
  }
  return finish(sub, q, e, iterations, InnerStatus::kMaxIters);
}

}  // namespace

std::string to_string(InnerStatus s) {
  switch (s) {
    case InnerStatus::kConverged:
      return "converged";
    case InnerStatus::kMaxIters:
      return "max_iters";
    case InnerStatus::kFailed:
      return "failed";
  }
  return "unknown";
}

std::string to_string(InnerMethod m) {
  switch (m) {
    case InnerMethod::kSqp:
      return "sqp";
    case InnerMethod::kSubgradient:
      return "subgradient";
    case InnerMethod::kSoftmax:
      return "softmax";
  }
  return "unknown";
}

void validate(const InnerConfig& cfg) {
  if (cfg.max_iters < 1) throw std::invalid_argument("inner.max_iters must be >= 1");
  if (!(cfg.tol_opt > 0)) throw std::invalid_argument("inner.tol_opt must be positive");
  if (!(cfg.tol_feas >= 0)) throw std::invalid_argument("inner.tol_feas must be nonnegative");
  if (!(cfg.step_constant > 0)) throw std::invalid_argument("inner.step_constant must be positive");
  if (cfg.window < 1) throw std::invalid_argument("inner.window must be >= 1");
  if (cfg.stall_iters < 1) throw std::invalid_argument("inner.stall_iters must be >= 1");
}

double feasibility_residual(const ManifoldPoint& p, const SubproblemSpec& spec) {
  const VectorObjective& F = spec.objective.get();
  return max_generator_product(F.eval(p) - F.eval(spec.anchor), spec.Z).value;
}

double prox_objective(const ManifoldPoint& p, const SubproblemSpec& spec) {
  const double d = dist(p, spec.anchor);
  return scalarize(spec.objective.get().eval(p), spec.direction, spec.Z).value +
         0.5 * spec.lambda * d * d;
}

double stationarity_residual(const ManifoldPoint& p, const SubproblemSpec& spec) {
  const TangentVector w = scalarized_subgradient(spec.objective.get(), p, spec.direction, spec.Z);
  return norm(add(w, scale(log(p, spec.anchor), -spec.lambda)));
}

SubproblemResult solve_subproblem(const SubproblemSpec& spec, const InnerObserver& observer) {
  check_spec(spec);
  const Subproblem sub(spec);
  try {
    switch (spec.inner.method) {
      case InnerMethod::kSqp:
        return solve_sqp(sub, observer);
      case InnerMethod::kSubgradient:
        return solve_subgradient(sub, observer);
      case InnerMethod::kSoftmax:
        return solve_softmax(sub, observer);
    }
    throw std::invalid_argument("unknown inner method");
  } catch (const ProblemError&) {
    // Non-finite oracle output somewhere along the inner path.
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {spec.anchor, nan, nan, nan, 0, InnerStatus::kFailed};
  } catch (const GeometryError&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {spec.anchor, nan, nan, nan, 0, InnerStatus::kFailed};
  }
}

}  // namespace hadprox
