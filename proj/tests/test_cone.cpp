#include "hadprox/cone.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hadprox;

TEST(Cone, OrthantMembership) {
  const GeneratorSet Z = GeneratorSet::orthant(3);
  EXPECT_TRUE(in_cone(Vec{{0, 1, 2}}, Z));
  EXPECT_FALSE(in_cone(Vec{{0, 1, 2}}, Z, Strictness::kStrict));
  EXPECT_TRUE(in_cone(Vec{{1e-3, 1, 2}}, Z, Strictness::kStrict));
  EXPECT_FALSE(in_cone(Vec{{-1e-6, 1, 2}}, Z));
  EXPECT_TRUE(leq_C(Vec{{0, 0, 0}}, Vec{{1, 0, 3}}, Z));
  EXPECT_FALSE(leq_C(Vec{{0, 0, 0}}, Vec{{1, 0, 3}}, Z, Strictness::kStrict));
}

TEST(Cone, CustomGeneratorsAreNormalizedAndValidated) {
  const GeneratorSet Z = GeneratorSet::custom({Vec{{2, 2}}, Vec{{0, 3}}});
  EXPECT_NEAR(Z[0].lpNorm<1>(), 1.0, 1e-15);
  EXPECT_NEAR(Z[1].lpNorm<1>(), 1.0, 1e-15);
  EXPECT_THROW(GeneratorSet::custom({Vec{{0, 0}}}), ConeError);
  EXPECT_THROW(GeneratorSet::custom({Vec{{1, 0}}, Vec{{1, 0, 0}}}), ConeError);
  EXPECT_THROW(GeneratorSet::custom({}), ConeError);
}

TEST(Cone, DirectionMustBeInterior) {
  const GeneratorSet Z = GeneratorSet::orthant(2);
  EXPECT_THROW(ScalarizationDirection(Vec{{1, 0}}, Z), ConeError);
  const ScalarizationDirection e = uniform_direction(Z);
  EXPECT_TRUE(e.is_unit());
  EXPECT_NEAR(e.weights()[0], 1 / std::sqrt(2.0), 1e-15);
}

TEST(Cone, ScalarizationKnownValues) {
  const GeneratorSet Z = GeneratorSet::orthant(2);
  const ScalarizationDirection e = uniform_direction(Z);
  const Scalarized s = scalarize(Vec{{1, 3}}, e, Z);
  EXPECT_NEAR(s.value, 3 * std::sqrt(2.0), 1e-14);
  EXPECT_EQ(s.active, 1u);
  EXPECT_EQ(scalarize(Vec{{2, 2}}, e, Z).active, 0u);
  // f(t e) = t.
  EXPECT_NEAR(scalarize(0.7 * e.vec(), e, Z).value, 0.7, 1e-15);
}

TEST(Cone, MaxFormAgreesWithInfOracle) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const GeneratorSet Z = GeneratorSet::custom({Vec{{1, 0.2, 0}}, Vec{{0, 1, 0.5}}, Vec{{0.3, 0, 1}}});
  const ScalarizationDirection e(Vec{{1, 1, 1}}.normalized(), Z);
  for (int i = 0; i < 500; ++i) {
    const Vec y{{g(rng), g(rng), g(rng)}};
    EXPECT_NEAR(scalarize(y, e, Z).value, scalarize_inf_oracle(y, e, Z, 1e-12), 1e-9);
  }
}

TEST(Cone, TranslationAndMonotonicity) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  const GeneratorSet Z = GeneratorSet::orthant(3);
  const ScalarizationDirection e = uniform_direction(Z);
  for (int i = 0; i < 500; ++i) {
    const Vec y{{g(rng), g(rng), g(rng)}};
    const double t = g(rng);
    EXPECT_NEAR(scalarize(y + t * e.vec(), e, Z).value, scalarize(y, e, Z).value + t, 1e-12);
    const Vec bigger = y + Vec{{std::abs(g(rng)), std::abs(g(rng)), std::abs(g(rng))}};
    EXPECT_LE(scalarize(y, e, Z).value, scalarize(bigger, e, Z).value + 1e-12);
  }
}

TEST(Cone, PointednessAudit) {
  EXPECT_EQ(pointedness_audit(GeneratorSet::orthant(2), 2000, 1), 0.0);
  // Generators spanning only one direction leave a line in C.
  const GeneratorSet line = GeneratorSet::custom({Vec{{1, 0}}});
  EXPECT_GT(pointedness_audit(line, 2000, 1), 0.0);
}
