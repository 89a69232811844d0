#include "hadprox/sharpness.hpp"

#include "hadprox/kernels.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

namespace hadprox {

namespace {

constexpr double kLevelSetTol = 1e-8;

void check_query(const SharpnessQuery& q) {
  if (q.probes.empty()) throw std::invalid_argument("sharpness query needs at least one probe");
  if (!q.level_distance && q.level_samples.empty()) {
    throw std::invalid_argument("sharpness query needs level-set samples or a distance callback");
  }
  const Vec target = q.objective.eval(q.candidate);
  for (const ManifoldPoint& s : q.level_samples) {
    if ((q.objective.eval(s) - target).norm() > kLevelSetTol) {
      throw std::invalid_argument("level-set sample does not satisfy G(q) = G(candidate)");
    }
  }
}

// Per-probe ratios; throws when a probe sits on the level set.
std::vector<double> ratios(const SharpnessQuery& q, const std::function<double(const Vec&)>& gap) {
  const Vec base = q.objective.eval(q.candidate);
  const auto n = static_cast<kernels::Index>(q.probes.size());
  const std::vector<double> dists = kernels::map_parallel(
      n, [&](kernels::Index i) { return distance_to_level_set(q, q.probes[static_cast<std::size_t>(i)]); });
  for (double d : dists) {
    if (!(d > 0)) throw std::invalid_argument("probe has zero distance to the level set");
  }
  return kernels::map_parallel(n, [&](kernels::Index i) {
    const auto k = static_cast<std::size_t>(i);
    return gap(q.objective.eval(q.probes[k]) - base) / dists[k];
  });
}

std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

double dist_to_neg_cone(const Vec& y, const GeneratorSet& Z) {
  if (Z.kind() == ConeKind::kCustom) {
    throw ConeError("dist_to_neg_cone supports only the nonnegative orthant");
  }
  if (y.size() != Z.m()) throw ConeError("dimension mismatch in dist_to_neg_cone");
  return y.cwiseMax(0.0).norm();
}

std::uint64_t probe_hash(const std::vector<ManifoldPoint>& probes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const ManifoldPoint& p : probes) {
    for (Eigen::Index i = 0; i < p.coords.size(); ++i) {
      unsigned char bytes[sizeof(double)];
      const double c = p.coords(i);
      std::memcpy(bytes, &c, sizeof c);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
      }
    }
  }
  return h;
}

double distance_to_level_set(const SharpnessQuery& q, const ManifoldPoint& p) {
  if (q.level_distance) return q.level_distance(p);
  double best = std::numeric_limits<double>::infinity();
  for (const ManifoldPoint& s : q.level_samples) best = std::min(best, dist(p, s));
  return best;
}

SharpnessEstimate estimate_sharpness_modulus(const SharpnessQuery& q) {
  check_query(q);
  const auto r = ratios(q, [&](const Vec& y) { return dist_to_neg_cone(y, q.Z); });
  SharpnessEstimate est;
  est.worst_probe = argmin(r);
  est.tau = std::max(0.0, r[est.worst_probe]);
  est.probe_count = q.probes.size();
  est.hash = probe_hash(q.probes);
  est.level_set_source =
      q.level_distance ? "closed_form" : "samples:" + std::to_string(q.level_samples.size());
  return est;
}

TransferReport scalar_transfer_audit(const SharpnessQuery& q, const ScalarizationDirection& e,
                                     const GeneratorSet& Z, double threshold) {
  TransferReport report;
  report.threshold = threshold;
  report.tau_vector = estimate_sharpness_modulus(q).tau;
  // f(F~(candidate)) = f(0) = 0.
  const auto r = ratios(q, [&](const Vec& y) { return scalarize(y, e, Z).value; });
  report.worst_scalar_probe = argmin(r);
  report.tau_scalar = r[report.worst_scalar_probe];
  report.hash = probe_hash(q.probes);
  report.hypothesis_met = report.tau_vector > threshold;
  if (!report.hypothesis_met) {
    report.passed = true;
    report.verdict = "hypothesis not met";
  } else {
    report.passed = report.tau_scalar > 0;
    report.verdict = report.passed ? "transfer holds" : "transfer violated";
  }
  return report;
}

}  // namespace hadprox
