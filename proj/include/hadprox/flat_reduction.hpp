#pragma once

#include "hadprox/proxpoint.hpp"

#include <vector>

namespace hadprox {

/// Flat-space max-scalarization proximal loop for F_i(x) = |x - a_i|^2 with
/// the orthant order, written directly in R^n arithmetic (no manifold or cone
/// machinery). Mirrors the inner schemes (sqp, subgradient) and stopping rules
/// of `run`, so on Euclidean orthant problems the two traces coincide.
SolveTrace flat_prox_reference(const std::vector<Vec>& anchors, const Vec& p0, const OuterConfig& cfg);

/// Iterates are compared index by index; the shorter trace is padded with its
/// terminal iterate, so a one-step difference in stopping near a fixed point
/// does not count as disagreement.
struct TraceAgreement {
  std::size_t compared = 0;
  bool same_length = false;
  double max_distance = 0;
  std::size_t worst_k = 0;
  bool agrees(double tol) const { return max_distance <= tol; }
};

TraceAgreement compare_traces(const SolveTrace& a, const SolveTrace& b);

}  // namespace hadprox
