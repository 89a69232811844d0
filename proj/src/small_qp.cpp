#include "hadprox/small_qp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hadprox {

MinimaxQpSolution solve_minimax_qp(const MinimaxQp& qp) {
  const std::size_t P = qp.piece_offset.size();
  const std::size_t Q = qp.cons_offset.size();
  const auto n = static_cast<std::size_t>(qp.center.size());
  if (P == 0) throw std::invalid_argument("minimax QP needs at least one piece");
  if (qp.piece_grad.size() != P || qp.cons_grad.size() != Q) {
    throw std::invalid_argument("minimax QP: offsets and gradients differ in count");
  }
  if (P + Q > 20) throw std::invalid_argument("minimax QP: too many rows for active-set enumeration");
  if (!(qp.M > 0)) throw std::invalid_argument("minimax QP: M must be positive");

  const std::size_t K = P + Q;
  std::vector<const Eigen::VectorXd*> grad(K);
  std::vector<double> offset(K);
  for (std::size_t r = 0; r < K; ++r) {
    grad[r] = r < P ? &qp.piece_grad[r] : &qp.cons_grad[r - P];
    offset[r] = r < P ? qp.piece_offset[r] : qp.cons_offset[r - P];
  }
  Eigen::MatrixXd gram(K, K);
  Eigen::VectorXd at_center(K);
  double scale = 1.0;
  for (std::size_t r = 0; r < K; ++r) {
    at_center[r] = offset[r] + grad[r]->dot(qp.center);
    scale = std::max({scale, std::abs(offset[r]), grad[r]->norm() * (1.0 + qp.center.norm())});
    for (std::size_t s = 0; s <= r; ++s) gram(r, s) = gram(s, r) = grad[r]->dot(*grad[s]);
  }
  const double tol = 1e-11 * scale;

  MinimaxQpSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  const std::uint32_t piece_mask = (1u << P) - 1;
  const std::uint32_t limit = 1u << K;
  std::vector<std::size_t> rows;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    if ((mask & piece_mask) == 0) continue;
    const auto s = static_cast<std::size_t>(std::popcount(mask));
    if (s > n + 1) continue;
    rows.clear();
    for (std::size_t r = 0; r < K; ++r) {
      if (mask & (1u << r)) rows.push_back(r);
    }
    // Unknowns: multipliers of the active rows, then t.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(s + 1, s + 1);
    Eigen::VectorXd b(s + 1);
    for (std::size_t a = 0; a < s; ++a) {
      for (std::size_t c = 0; c < s; ++c) A(a, c) = -gram(rows[a], rows[c]) / qp.M;
      const bool piece = rows[a] < P;
      A(a, s) = piece ? -1.0 : 0.0;
      A(s, a) = piece ? 1.0 : 0.0;
      b[a] = -at_center[rows[a]];
    }
    b[s] = 1.0;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd y = lu.solve(b);
    if (!y.allFinite()) continue;
    bool ok = true;
    for (std::size_t a = 0; a < s && ok; ++a) ok = y[a] >= -1e-10;
    if (!ok) continue;

    Eigen::VectorXd v = qp.center;
    for (std::size_t a = 0; a < s; ++a) v -= (y[a] / qp.M) * *grad[rows[a]];
    double t = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < P; ++j) t = std::max(t, offset[j] + grad[j]->dot(v));
    if (t > y[s] + tol) continue;
    for (std::size_t i = P; i < K && ok; ++i) ok = offset[i] + grad[i]->dot(v) <= tol;
    if (!ok) continue;
    const double obj = t + 0.5 * qp.M * (v - qp.center).squaredNorm();
    if (obj < best.objective) {
      best.feasible = true;
      best.v = v;
      best.t = t;
      best.objective = obj;
      best.piece_multipliers.assign(P, 0.0);
      best.cons_multipliers.assign(Q, 0.0);
      for (std::size_t a = 0; a < s; ++a) {
        const double mu = std::max(0.0, y[a]);
        if (rows[a] < P) {
          best.piece_multipliers[rows[a]] = mu;
        } else {
          best.cons_multipliers[rows[a] - P] = mu;
        }
      }
    }
  }
  return best;
}

}  // namespace hadprox
