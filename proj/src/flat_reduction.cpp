#include "hadprox/flat_reduction.hpp"

#include "hadprox/small_qp.hpp"

#include <cmath>
#include <deque>
#include <numeric>

namespace hadprox {

namespace {

struct FlatEval {
  Vec values;
  double phi;
  double feas;
  Eigen::Index feas_active;
};

struct FlatInner {
  Vec point;
  double feas;
  int iterations;
  InnerStatus status;
};

Vec values_at(const std::vector<Vec>& anchors, const Vec& x) {
  Vec y(static_cast<Eigen::Index>(anchors.size()));
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = (x - anchors[i]).squaredNorm();
  }
  return y;
}

// Largest entry, lowest index on ties.
Eigen::Index arg_max(const Vec& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}

FlatInner solve_inner_subgradient(const std::vector<Vec>& anchors, const Vec& anchor, const Vec& e,
                                  double lambda, const InnerConfig& cfg) {
  const Vec anchor_values = values_at(anchors, anchor);
  auto evaluate = [&](const Vec& x) {
    const Vec y = values_at(anchors, x);
    const Vec gap = y - anchor_values;
    const Eigen::Index j = arg_max(gap);
    const Vec ratio = y.cwiseQuotient(e);
    const double phi = ratio.maxCoeff() + 0.5 * lambda * (x - anchor).squaredNorm();
    return FlatEval{y, phi, gap(j), j};
  };

  Vec x = anchor;
  Vec best = anchor;
  FlatEval best_eval = evaluate(anchor);
  std::deque<double> improvements;
  int last_improvement = 0;

  for (int t = 0; t < cfg.max_iters; ++t) {
    const FlatEval ev = evaluate(x);
    const bool infeasible = ev.feas > cfg.tol_feas;
    if (!infeasible && ev.phi < best_eval.phi) {
      improvements.push_back(best_eval.phi - ev.phi);
      if (static_cast<int>(improvements.size()) > cfg.window) improvements.pop_front();
      best = x;
      best_eval = ev;
      last_improvement = t;
    }
    if (static_cast<int>(improvements.size()) == cfg.window) {
      const double total = std::accumulate(improvements.begin(), improvements.end(), 0.0);
      if (total < cfg.tol_opt * (1 + std::abs(best_eval.phi))) {
        return {best, best_eval.feas, t + 1, InnerStatus::kConverged};
      }
    }
    if (t - last_improvement >= cfg.stall_iters) {
      return {best, best_eval.feas, t + 1, InnerStatus::kConverged};
    }

    Vec dir;
    if (infeasible) {
      dir = 2.0 * (x - anchors[static_cast<std::size_t>(ev.feas_active)]);
    } else {
      const Eigen::Index i = arg_max(ev.values.cwiseQuotient(e));
      dir = (2.0 / e(i)) * (x - anchors[static_cast<std::size_t>(i)]) + lambda * (x - anchor);
    }
    if (dir.norm() == 0) return {best, best_eval.feas, t + 1, InnerStatus::kConverged};
    const double alpha = cfg.step_constant / (lambda * (t + 1));
    const Vec move = -alpha * dir;
    if (move.norm() >= kSmallVector) x = x + move;
  }
  return {best, best_eval.feas, cfg.max_iters, InnerStatus::kMaxIters};
}

FlatInner solve_inner_sqp(const std::vector<Vec>& anchors, const Vec& anchor, const Vec& e, double lambda,
                          const InnerConfig& cfg) {
  const std::size_t m = anchors.size();
  const Vec anchor_values = values_at(anchors, anchor);
  const double margin = 1e-15 * (1 + anchor_values.cwiseAbs().maxCoeff());
  auto phi_at = [&](const Vec& y, const Vec& x) {
    return y.cwiseQuotient(e).maxCoeff() + 0.5 * lambda * (x - anchor).squaredNorm();
  };

  Vec x = anchor;
  Vec y = anchor_values;
  double phi = phi_at(y, x);
  double L = lambda;
  std::deque<double> improvements;
  int iterations = 0;

  while (iterations < cfg.max_iters) {
    MinimaxQp qp;
    for (std::size_t j = 0; j < m; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const Vec grad = 2.0 * (x - anchors[j]);
      qp.piece_offset.push_back(y(jj) / e(jj));
      qp.piece_grad.push_back(grad / e(jj));
      qp.cons_offset.push_back(y(jj) - anchor_values(jj));
      qp.cons_grad.push_back(grad);
    }
    const Vec b = anchor - x;
    const std::vector<double> base = qp.cons_offset;
    std::vector<double> shift(m, 0.0);
    bool accepted = false;
    for (int c = 0; c < 6 && iterations < cfg.max_iters; ++c) {
      qp.M = lambda + L;
      qp.center = (lambda / qp.M) * b;
      for (std::size_t j = 0; j < m; ++j) qp.cons_offset[j] = base[j] + shift[j];
      const MinimaxQpSolution sol = solve_minimax_qp(qp);
      ++iterations;
      if (!sol.feasible) break;
      if (c == 0 && sol.v.norm() <= 1e-15 * (1 + x.norm())) {
        return {x, (y - anchor_values).maxCoeff(), iterations, InnerStatus::kConverged};
      }
      const double model =
          sol.t + 0.5 * lambda * (sol.v - b).squaredNorm() + 0.5 * L * sol.v.squaredNorm();
      const Vec trial = x + sol.v;
      const Vec ty = values_at(anchors, trial);
      if ((ty - anchor_values).maxCoeff() > 0) {
        for (std::size_t j = 0; j < m; ++j) {
          const auto jj = static_cast<Eigen::Index>(j);
          shift[j] = std::max(shift[j],
                              ty(jj) - anchor_values(jj) - base[j] - qp.cons_grad[j].dot(sol.v) + margin);
        }
        continue;
      }
      const double tphi = phi_at(ty, trial);
      if (tphi < phi && tphi <= phi - 1e-4 * std::max(0.0, phi - model)) {
        improvements.push_back(phi - tphi);
        if (static_cast<int>(improvements.size()) > cfg.window) improvements.pop_front();
        x = trial;
        y = ty;
        phi = tphi;
        accepted = true;
      }
      break;
    }
    if (accepted) {
      L = std::max(0.5 * L, 1e-12 * lambda);
      if (static_cast<int>(improvements.size()) == cfg.window &&
          std::accumulate(improvements.begin(), improvements.end(), 0.0) < cfg.tol_opt * (1 + std::abs(phi))) {
        return {x, (y - anchor_values).maxCoeff(), iterations, InnerStatus::kConverged};
      }
    } else {
      L *= 4;
      if (L > 1e16 * lambda) return {x, (y - anchor_values).maxCoeff(), iterations, InnerStatus::kConverged};
    }
  }
  return {x, (y - anchor_values).maxCoeff(), iterations, InnerStatus::kMaxIters};
}

}  // namespace

SolveTrace flat_prox_reference(const std::vector<Vec>& anchors, const Vec& p0, const OuterConfig& cfg) {
  if (anchors.empty()) throw std::invalid_argument("flat reference needs anchors");
  const int m = static_cast<int>(anchors.size());
  const GeneratorSet Z = GeneratorSet::orthant(m);
  validate(cfg, Z);
  if (cfg.inner.method == InnerMethod::kSoftmax) {
    throw std::invalid_argument("flat reference supports the sqp and subgradient inner methods");
  }
  const ManifoldId manifold = ManifoldId::euclidean(static_cast<int>(p0.size()));

  SolveTrace trace;
  trace.manifold = manifold;
  trace.m = m;
  auto record = [&](int k, const Vec& x) {
    IterationRecord r;
    r.k = k;
    r.point = ManifoldPoint{manifold, x};
    r.values = values_at(anchors, x);
    r.lambda = cfg.lambda.at(k);
    r.direction = cfg.directions.at(k, Z);
    r.f_value = r.values.cwiseQuotient(r.direction).maxCoeff();
    return r;
  };

  trace.records.push_back(record(0, p0));
  for (int k = 0; k < cfg.max_outer; ++k) {
    const Vec cur = trace.records.back().point.coords;
    const double lambda = trace.records.back().lambda;
    const Vec e = trace.records.back().direction;
    const FlatInner res = cfg.inner.method == InnerMethod::kSubgradient
                              ? solve_inner_subgradient(anchors, cur, e, lambda, cfg.inner)
                              : solve_inner_sqp(anchors, cur, e, lambda, cfg.inner);
    IterationRecord next = record(k + 1, res.point);
    next.step = (res.point - cur).norm();
    next.feas_residual = std::max(0.0, res.feas);
    next.inner_iterations = res.iterations;
    next.inner_status = res.status;
    const double step = next.step;
    trace.records.push_back(std::move(next));
    if (step <= cfg.tol_step) {
      trace.status = RunStatus::kStepConverged;
      return trace;
    }
  }
  trace.status = RunStatus::kMaxOuter;
  return trace;
}

TraceAgreement compare_traces(const SolveTrace& a, const SolveTrace& b) {
  TraceAgreement out;
  out.same_length = a.records.size() == b.records.size();
  out.compared = std::max(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < out.compared; ++k) {
    const Vec& pa = a.records[std::min(k, a.records.size() - 1)].point.coords;
    const Vec& pb = b.records[std::min(k, b.records.size() - 1)].point.coords;
    const double d = (pa - pb).norm();
    if (d > out.max_distance) {
      out.max_distance = d;
      out.worst_k = k;
    }
  }
  return out;
}

}  // namespace hadprox
