#include "hadprox/sharpness.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hadprox;

namespace {

SharpnessQuery query(const VectorObjective& G, const ManifoldId& m, int probes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SharpnessQuery q{G, origin(m), {}, {}, {}, GeneratorSet::orthant(G.m())};
  const ManifoldPoint o = origin(m);
  q.level_distance = [o](const ManifoldPoint& p) { return dist(p, o); };
  for (int i = 0; i < probes; ++i) q.probes.push_back(random_point(m, rng, 1.0));
  return q;
}

}  // namespace

TEST(Sharpness, DistanceToNegativeOrthant) {
  const GeneratorSet Z = GeneratorSet::orthant(3);
  EXPECT_EQ(dist_to_neg_cone(Vec{{-1, -2, 0}}, Z), 0.0);
  EXPECT_NEAR(dist_to_neg_cone(Vec{{3, -1, 4}}, Z), 5.0, 1e-15);
  EXPECT_THROW(dist_to_neg_cone(Vec{{1, 1}}, GeneratorSet::custom({Vec{{1, 1}}, Vec{{0, 1}}})), std::invalid_argument);
}

TEST(Sharpness, WeightedNormModulusIsWeightNorm) {
  // G = (w1 d, w2 d) is nonnegative, so d(G, -C) / d = |w|.
  for (const auto m : {ManifoldId::euclidean(2), ManifoldId::hyperboloid(2)}) {
    const SharpnessQuery q = query(builtin::weighted_norms(m, {1.0, 0.5}), m, 200, 2);
    const SharpnessEstimate e = estimate_sharpness_modulus(q);
    EXPECT_NEAR(e.tau, std::sqrt(1.25), 1e-12) << m.name();
    EXPECT_EQ(e.level_set_source, "closed_form");
    EXPECT_EQ(e.probe_count, 200u);
  }
}

TEST(Sharpness, SquaredNormModulusVanishesNearCandidate) {
  const auto E = ManifoldId::euclidean(2);
  SharpnessQuery q = query(builtin::weighted_sq_norms(E, {1.0, 1.0}), E, 0, 1);
  for (double r = 1; r > 1e-6; r /= 10) q.probes.push_back(make_point(E, Vec{{r, 0}}));
  EXPECT_LE(estimate_sharpness_modulus(q).tau, 1e-5);
}

TEST(Sharpness, SampledLevelSetMatchesClosedForm) {
  const auto E = ManifoldId::euclidean(2);
  SharpnessQuery q = query(builtin::weighted_norms(E, {1.0, 1.0}), E, 50, 3);
  const double closed = estimate_sharpness_modulus(q).tau;
  q.level_distance = {};
  q.level_samples = {origin(E)};
  const SharpnessEstimate sampled = estimate_sharpness_modulus(q);
  EXPECT_NEAR(sampled.tau, closed, 1e-12);
  EXPECT_EQ(sampled.level_set_source, "samples:1");
}

TEST(Sharpness, ProbeHashIsStable) {
  const auto E = ManifoldId::euclidean(2);
  const SharpnessQuery a = query(builtin::weighted_norms(E, {1.0, 1.0}), E, 20, 9);
  const SharpnessQuery b = query(builtin::weighted_norms(E, {1.0, 1.0}), E, 20, 9);
  const SharpnessQuery c = query(builtin::weighted_norms(E, {1.0, 1.0}), E, 20, 10);
  EXPECT_EQ(probe_hash(a.probes), probe_hash(b.probes));
  EXPECT_NE(probe_hash(a.probes), probe_hash(c.probes));
}

TEST(Sharpness, ScalarTransfer) {
  const auto H = ManifoldId::hyperboloid(2);
  const SharpnessQuery q = query(builtin::weighted_norms(H, {1.0, 2.0}), H, 100, 4);
  const GeneratorSet Z = GeneratorSet::orthant(2);
  const TransferReport r = scalar_transfer_audit(q, uniform_direction(Z), Z);
  EXPECT_TRUE(r.hypothesis_met);
  EXPECT_TRUE(r.passed);
  EXPECT_GT(r.tau_scalar, 0.0);
}
