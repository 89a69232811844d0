#pragma once

#include "hadprox/cone.hpp"
#include "hadprox/manifold.hpp"
#include "hadprox/problem.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hadprox {

/// Probe set for a weak-sharp-minimum check of `objective` at `candidate`.
/// d(p, W) comes from `level_distance` when set, otherwise from the minimum
/// distance to `level_samples` (points where G equals G(candidate)).
struct SharpnessQuery {
  VectorObjective objective;
  ManifoldPoint candidate;
  std::vector<ManifoldPoint> level_samples;
  std::function<double(const ManifoldPoint&)> level_distance;
  std::vector<ManifoldPoint> probes;
  GeneratorSet Z;
};

/// Euclidean distance from y to -C for the nonnegative orthant: |max(y, 0)|.
/// Other cones need a quadratic program and are rejected.
double dist_to_neg_cone(const Vec& y, const GeneratorSet& Z);

/// FNV-1a over the probe coordinates, for report reproducibility.
std::uint64_t probe_hash(const std::vector<ManifoldPoint>& probes);

double distance_to_level_set(const SharpnessQuery& q, const ManifoldPoint& p);

struct SharpnessEstimate {
  double tau = 0;
  std::size_t worst_probe = 0;
  std::size_t probe_count = 0;
  std::uint64_t hash = 0;
  std::string level_set_source;  // "closed_form" or "samples:<count>"
};

/// min over probes of d(G(p) - G(candidate), -C) / d(p, W).
SharpnessEstimate estimate_sharpness_modulus(const SharpnessQuery& q);

struct TransferReport {
  double tau_vector = 0;
  double tau_scalar = 0;
  double threshold = 0;
  bool hypothesis_met = false;  // tau_vector > threshold
  bool passed = false;          // hypothesis_met implies tau_scalar > 0
  std::size_t worst_scalar_probe = 0;
  std::uint64_t hash = 0;
  std::string verdict;
};

/// Compares the vector modulus with the modulus of p -> f(F(p) - F(candidate))
/// on the same probes.
TransferReport scalar_transfer_audit(const SharpnessQuery& q, const ScalarizationDirection& e,
                                     const GeneratorSet& Z, double threshold = 1e-6);

}  // namespace hadprox
