#pragma once

#include "hadprox/manifold.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hadprox {

class ConeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Absolute slack for cone membership tests.
inline constexpr double kConeTol = 1e-12;

enum class ConeKind { kScalar, kOrthant, kCustom };

/// Finite generator set Z describing the ordering cone by duality,
/// C = { y : <y, z> >= 0 for all z in Z }.
class GeneratorSet {
 public:
  static GeneratorSet scalar();
  static GeneratorSet orthant(int m);
  /// Each generator is l1-normalized; zero generators are rejected.
  static GeneratorSet custom(const std::vector<Vec>& generators);

  int m() const { return m_; }
  ConeKind kind() const { return kind_; }
  const std::vector<Vec>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }
  const Vec& operator[](std::size_t j) const { return generators_[j]; }

 private:
  GeneratorSet(ConeKind kind, int m, std::vector<Vec> gens)
      : kind_(kind), m_(m), generators_(std::move(gens)) {}

  ConeKind kind_;
  int m_;
  std::vector<Vec> generators_;
};

/// e in int C: <e, z_j> > 0 for every generator. Unit norm is a separate
/// requirement enforced by the outer loop configuration.
class ScalarizationDirection {
 public:
  ScalarizationDirection(Vec e, const GeneratorSet& Z);

  const Vec& vec() const { return e_; }
  /// Cached <e, z_j>.
  const std::vector<double>& weights() const { return weights_; }
  bool is_unit(double tol = 1e-12) const { return std::abs(e_.norm() - 1.0) <= tol; }

 private:
  Vec e_;
  std::vector<double> weights_;
};

/// Normalized (1,...,1)/sqrt(m).
ScalarizationDirection uniform_direction(const GeneratorSet& Z);

enum class Strictness { kNonStrict, kStrict };

bool in_cone(const Vec& y, const GeneratorSet& Z, Strictness strict = Strictness::kNonStrict,
             double slack = kConeTol);
/// a <=_C b (or a <_C b when strict).
bool leq_C(const Vec& a, const Vec& b, const GeneratorSet& Z,
           Strictness strict = Strictness::kNonStrict, double slack = kConeTol);

struct Scalarized {
  double value;
  std::size_t active;  // argmax generator, lowest index on ties
};

/// f(y) = max_j <y, z_j> / <e, z_j>.
Scalarized scalarize(const Vec& y, const ScalarizationDirection& e, const GeneratorSet& Z);

/// f(y) = inf { t : t e - y in C } by bracketing and bisection. Independent
/// of the max form; used to cross-check it.
double scalarize_inf_oracle(const Vec& y, const ScalarizationDirection& e, const GeneratorSet& Z,
                            double tol);

/// max_j <y, z_j>: <= 0 iff -y in C.
Scalarized max_generator_product(const Vec& y, const GeneratorSet& Z);

/// Pointedness audit: largest |y| with y and -y both (approximately) in C,
/// over random samples and their projections onto ker [z_1 ... z_N]^T.
/// Zero for pointed cones.
double pointedness_audit(const GeneratorSet& Z, int samples, std::uint64_t seed);

}  // namespace hadprox
