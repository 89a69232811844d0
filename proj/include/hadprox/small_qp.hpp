#pragma once

#include <Eigen/Dense>

#include <vector>

namespace hadprox {

/// Dense minimax QP in R^n, small enough to solve by enumerating active sets:
///
///   minimize    t + (M/2) |v - center|^2
///   subject to  piece_offset[j] + piece_grad[j] . v <= t     (j = 1..P, P >= 1)
///               cons_offset[i]  + cons_grad[i]  . v <= 0     (i = 1..Q)
///
/// The optimal dual solution can be taken basic (at most n+1 active rows with
/// independent gradients), so every row subset of that size is tried and the
/// best KKT-consistent candidate is returned. Cost grows like 2^(P+Q); P + Q
/// is capped at 20.
struct MinimaxQp {
  double M = 1.0;
  Eigen::VectorXd center;
  std::vector<double> piece_offset;
  std::vector<Eigen::VectorXd> piece_grad;
  std::vector<double> cons_offset;
  std::vector<Eigen::VectorXd> cons_grad;
};

struct MinimaxQpSolution {
  bool feasible = false;
  Eigen::VectorXd v;
  double t = 0;          // max_j piece value at v
  double objective = 0;  // t + (M/2)|v - center|^2
  std::vector<double> piece_multipliers;
  std::vector<double> cons_multipliers;
};

MinimaxQpSolution solve_minimax_qp(const MinimaxQp& qp);

}  // namespace hadprox
