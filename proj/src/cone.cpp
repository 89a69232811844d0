#include "hadprox/cone.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace hadprox {

namespace {

void check_dim(const Vec& y, const GeneratorSet& Z) {
  if (y.size() != Z.m()) {
    throw ConeError("dimension mismatch: vector has " + std::to_string(y.size()) +
                    " entries, cone lives in R^" + std::to_string(Z.m()));
  }
}

// t e - y in C with no slack.
bool dominates_exactly(double t, const Vec& y, const ScalarizationDirection& e,
                       const GeneratorSet& Z) {
  for (std::size_t j = 0; j < Z.size(); ++j) {
    if (t * e.weights()[j] - y.dot(Z[j]) < 0) return false;
  }
  return true;
}

}  // namespace

GeneratorSet GeneratorSet::scalar() { return GeneratorSet(ConeKind::kScalar, 1, {Vec::Ones(1)}); }

GeneratorSet GeneratorSet::orthant(int m) {
  if (m < 1) throw ConeError("orthant dimension must be >= 1");
  std::vector<Vec> gens;
  for (int i = 0; i < m; ++i) gens.push_back(Vec::Unit(m, i));
  return GeneratorSet(ConeKind::kOrthant, m, std::move(gens));
}

GeneratorSet GeneratorSet::custom(const std::vector<Vec>& generators) {
  if (generators.empty()) throw ConeError("generator set must be non-empty");
  const auto m = generators.front().size();
  if (m < 1) throw ConeError("generators must have positive dimension");
  std::vector<Vec> gens;
  for (const Vec& z : generators) {
    if (z.size() != m) throw ConeError("generators have inconsistent dimensions");
    if (!z.allFinite()) throw ConeError("generator has non-finite entries");
    const double l1 = z.lpNorm<1>();
    if (l1 == 0) throw ConeError("zero generator supplied");
    gens.push_back(z / l1);
  }
  return GeneratorSet(ConeKind::kCustom, static_cast<int>(m), std::move(gens));
}

ScalarizationDirection::ScalarizationDirection(Vec e, const GeneratorSet& Z) : e_(std::move(e)) {
  check_dim(e_, Z);
  for (const Vec& z : Z.generators()) {
    const double w = e_.dot(z);
    if (!(w > 0)) {
      throw ConeError("scalarization direction is not in int C (<e,z> = " + std::to_string(w) +
                      ")");
    }
    weights_.push_back(w);
  }
}

ScalarizationDirection uniform_direction(const GeneratorSet& Z) {
  return ScalarizationDirection(Vec::Ones(Z.m()) / std::sqrt(static_cast<double>(Z.m())), Z);
}

bool in_cone(const Vec& y, const GeneratorSet& Z, Strictness strict, double slack) {
  check_dim(y, Z);
  for (const Vec& z : Z.generators()) {
    const double s = y.dot(z);
    if (strict == Strictness::kStrict ? !(s > slack) : !(s >= -slack)) return false;
  }
  return true;
}

bool leq_C(const Vec& a, const Vec& b, const GeneratorSet& Z, Strictness strict, double slack) {
  check_dim(a, Z);
  return in_cone(b - a, Z, strict, slack);
}

Scalarized scalarize(const Vec& y, const ScalarizationDirection& e, const GeneratorSet& Z) {
  check_dim(y, Z);
  if (e.weights().size() != Z.size()) throw ConeError("direction built for another generator set");
  Scalarized best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t j = 0; j < Z.size(); ++j) {
    const double v = y.dot(Z[j]) / e.weights()[j];
    if (v > best.value) best = {v, j};
  }
  return best;
}

Scalarized max_generator_product(const Vec& y, const GeneratorSet& Z) {
  check_dim(y, Z);
  Scalarized best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t j = 0; j < Z.size(); ++j) {
    const double v = y.dot(Z[j]);
    if (v > best.value) best = {v, j};
  }
  return best;
}

double scalarize_inf_oracle(const Vec& y, const ScalarizationDirection& e, const GeneratorSet& Z,
                            double tol) {
  check_dim(y, Z);
  if (!(tol > 0)) throw ConeError("bisection tolerance must be positive");
  constexpr double kMaxBracket = 0x1p60;
  double hi = 1.0;
  while (!dominates_exactly(hi, y, e, Z)) {
    hi *= 2.0;
    if (hi > kMaxBracket) throw ConeError("inf-form bracket exceeded 2^60");
  }
  double lo = -1.0;
  while (dominates_exactly(lo, y, e, Z)) {
    lo *= 2.0;
    if (-lo > kMaxBracket) throw ConeError("inf-form bracket exceeded 2^60");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (dominates_exactly(mid, y, e, Z)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double pointedness_audit(const GeneratorSet& Z, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd G(static_cast<Eigen::Index>(Z.size()), Z.m());
  for (std::size_t j = 0; j < Z.size(); ++j) G.row(static_cast<Eigen::Index>(j)) = Z[j].transpose();
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(G);
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    Vec y(Z.m());
    for (int i = 0; i < Z.m(); ++i) y(i) = gauss(rng);
    // Also probe the projection onto ker G.
    const Vec lin = y - cod.solve(G * y);
    for (const Vec& c : {y, lin}) {
      if (c.norm() > 1e-9 && in_cone(c, Z) && in_cone(-c, Z)) worst = std::max(worst, c.norm());
    }
  }
  return worst;
}

}  // namespace hadprox
