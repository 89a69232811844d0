#include "hadprox/checks.hpp"

#include "hadprox/cone.hpp"
#include "hadprox/manifold.hpp"
#include "hadprox/problem.hpp"
#include "hadprox/proxpoint.hpp"
#include "hadprox/sharpness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hadprox {

namespace {

using Clock = std::chrono::steady_clock;

// Tracks the worst residual for one property.
class Property {
 public:
  Property(std::string suite, std::string name, double threshold)
      : r_{std::move(suite), std::move(name), true, -INFINITY, threshold, 0} {}

  // Records a residual where larger is worse; fails when it exceeds threshold.
  void upper(double residual) {
    ++r_.samples;
    r_.worst = std::max(r_.worst, residual);
    if (!(residual <= r_.threshold)) r_.passed = false;
  }
  // Records a value where smaller is worse; fails when below threshold.
  void lower(double value) {
    ++r_.samples;
    r_.worst = r_.samples == 1 ? value : std::min(r_.worst, value);
    if (!(value >= r_.threshold)) r_.passed = false;
  }
  void require(bool ok) {
    ++r_.samples;
    if (!ok) r_.passed = false;
  }
  PropertyResult done() {
    if (!std::isfinite(r_.worst)) r_.worst = 0;
    return r_;
  }

 private:
  PropertyResult r_;
};

std::vector<ManifoldId> test_manifolds() {
  return {ManifoldId::euclidean(2), ManifoldId::euclidean(3), ManifoldId::hyperboloid(2),
          ManifoldId::hyperboloid(3)};
}

Vec gaussian(int m, std::mt19937_64& rng, double sigma = 1.0) {
  std::normal_distribution<double> g(0.0, sigma);
  Vec v(m);
  for (int i = 0; i < m; ++i) v(i) = g(rng);
  return v;
}

// Unit direction with <e, z_j> >= 0.05 for every generator.
ScalarizationDirection random_direction(const GeneratorSet& Z, std::mt19937_64& rng) {
  for (;;) {
    Vec e = gaussian(Z.m(), rng);
    e.normalize();
    bool ok = true;
    for (const Vec& z : Z.generators()) ok = ok && e.dot(z) >= 0.05;
    if (ok) return ScalarizationDirection(e, Z);
  }
}

Vec random_cone_element(const GeneratorSet& Z, std::mt19937_64& rng) {
  for (;;) {
    Vec c = gaussian(Z.m(), rng, 2.0);
    if (in_cone(c, Z, Strictness::kNonStrict, 0.0)) return c;
  }
}

std::vector<GeneratorSet> test_cones() {
  Vec a(2), b(2);
  a << 1, -1;
  b << 1, 1;
  Vec c1(3), c2(3), c3(3), c4(3);
  c1 << 1, 0.2, 0;
  c2 << 0, 1, 0.2;
  c3 << 0.2, 0, 1;
  c4 << 1, 1, 1;
  return {GeneratorSet::scalar(), GeneratorSet::orthant(2), GeneratorSet::orthant(3),
          GeneratorSet::custom({a, b}), GeneratorSet::custom({c1, c2, c3, c4})};
}

std::vector<ProblemInstance> convex_builtins(std::mt19937_64& rng) {
  std::vector<ProblemInstance> out;
  for (const ManifoldId& m : test_manifolds()) {
    std::vector<ManifoldPoint> anchors;
    for (int i = 0; i < 3; ++i) anchors.push_back(random_point(m, rng, 1.5));
    out.push_back(builtin::anchor_problem(m, {anchors[0], anchors[1]}));
    out.push_back(builtin::anchor_problem(m, anchors));
    out.push_back(builtin::scalar_quadratic_problem(m));
  }
  return out;
}

}  // namespace

bool CheckReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

const PropertyResult& CheckReport::find(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no property named '" + name + "'");
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = "1";
  j["passed"] = passed();
  j["seconds"] = seconds;
  j["properties"] = nlohmann::json::array();
  for (const auto& r : results) {
    j["properties"].push_back({{"suite", r.suite},
                               {"name", r.name},
                               {"passed", r.passed},
                               {"worst", r.worst},
                               {"threshold", r.threshold},
                               {"samples", r.samples}});
  }
  return j;
}

CheckReport check_geometry(std::uint64_t seed, const GeometryCheckOptions& opts) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::string s = "geometry";
  Property round_trip(s, "exp_log_round_trip", 1e-8);
  Property norm_consistency(s, "log_norm_equals_dist", 1e-9);
  Property grad_fd(s, "grad_sq_dist_finite_difference", 1e-5);
  Property comparison_h(s, "comparison_inequality_hyperboloid", -1e-9);
  Property comparison_e(s, "comparison_equality_euclidean", 1e-9);
  Property strong_convexity(s, "sq_dist_strong_convexity", 1e-8);
  Property on_manifold(s, "exp_stays_on_manifold", 0);

  for (const ManifoldId& m : test_manifolds()) {
    const bool flat = m.kind == Geometry::kEuclidean;
    for (int i = 0; i < opts.samples; ++i) {
      const ManifoldPoint p = random_point(m, rng, 2.0);
      const ManifoldPoint q = exp(random_tangent(p, rng, 10.0 * unit(rng)));
      on_manifold.require([&] {
        try {
          check_point(q);
          return true;
        } catch (const GeometryError&) {
          return false;
        }
      }());
      round_trip.upper(dist(exp(log(p, q)), q));
      norm_consistency.upper(std::abs(norm(log(p, q)) - dist(p, q)));

      // Central differences of d^2(a, .) along a unit tangent at b.
      const ManifoldPoint a = random_point(m, rng, 2.0);
      const ManifoldPoint b = random_point(m, rng, 2.0);
      const TangentVector u = random_tangent(b, rng, 1.0);
      const double h = 1e-5;
      const double fd = (std::pow(dist(a, exp(scale(u, h))), 2) - std::pow(dist(a, exp(scale(u, -h))), 2)) /
                        (2 * h);
      const double an = inner(grad_sq_dist(a, b), u);
      grad_fd.upper(std::abs(fd - an) / std::max(1.0, std::abs(an)));

      const ManifoldPoint p3 = random_point(m, rng, 2.0);
      const double res = comparison_residual(p, a, p3, opts.inner_coefficient);
      if (flat) {
        comparison_e.upper(std::abs(res));
      } else {
        comparison_h.lower(res);
      }

      const ManifoldPoint g0 = random_point(m, rng, 2.0);
      const ManifoldPoint g1 = random_point(m, rng, 2.0);
      const double t = unit(rng);
      const double lhs = std::pow(dist(a, geodesic(g0, g1, t)), 2);
      const double rhs = (1 - t) * std::pow(dist(a, g0), 2) + t * std::pow(dist(a, g1), 2) -
                         t * (1 - t) * std::pow(dist(g0, g1), 2);
      strong_convexity.upper(lhs - rhs);
    }
  }
  CheckReport report;
  for (Property* p : {&round_trip, &norm_consistency, &grad_fd, &comparison_h, &comparison_e,
                      &strong_convexity, &on_manifold}) {
    report.results.push_back(p->done());
  }
  report.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return report;
}

CheckReport check_scalarization(std::uint64_t seed, int samples) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> alpha_dist(-5.0, 5.0);
  std::uniform_real_distribution<double> t_dist(0.1, 5.0);
  const std::string s = "scalarization";
  Property translation(s, "translation_scaling", 1e-10);
  Property monotone(s, "monotonicity", 1e-12);
  Property forms(s, "max_form_equals_inf_form", 2e-8);
  Property sublevel(s, "sublevel_iff_negative_cone", 0);
  Property pointed(s, "pointedness", 1e-10);

  const auto cones = test_cones();
  for (int i = 0; i < samples; ++i) {
    const GeneratorSet& Z = cones[static_cast<std::size_t>(i) % cones.size()];
    const ScalarizationDirection e = random_direction(Z, rng);
    const Vec y = gaussian(Z.m(), rng, 3.0);
    const double fy = scalarize(y, e, Z).value;

    const double a = alpha_dist(rng), t = t_dist(rng);
    translation.upper(std::abs(scalarize(t * y + a * e.vec(), e, Z).value - (t * fy + a)));

    const Vec c = random_cone_element(Z, rng);
    monotone.upper(fy - scalarize(y + c, e, Z).value);

    forms.upper(std::abs(fy - scalarize_inf_oracle(y, e, Z, 1e-8)));

    if (std::abs(fy) > 1e-9) sublevel.require((fy <= 0) == in_cone(-y, Z));
  }
  for (std::size_t k = 0; k < cones.size(); ++k) pointed.upper(pointedness_audit(cones[k], 2000, seed + k));

  CheckReport report;
  for (Property* p : {&translation, &monotone, &forms, &sublevel, &pointed}) report.results.push_back(p->done());
  report.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return report;
}

CheckReport check_subgradient(std::uint64_t seed, int samples) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  const std::string s = "subgradient";
  Property gradients(s, "objective_gradients_finite_difference", 1e-5);
  Property inequality(s, "subgradient_inequality", 1e-8);
  Property danskin(s, "danskin_directional_derivative", 1e-5);
  Property convex_audit(s, "c_convexity_of_builtins", 1e-8);
  Property concave_detected(s, "concave_fixture_detected", 0);

  const auto problems = convex_builtins(rng);
  const int per_problem = std::max(1, samples / static_cast<int>(problems.size()));
  for (const ProblemInstance& prob : problems) {
    const VectorObjective& F = prob.objective;
    const ManifoldId& m = F.manifold();
    for (int i = 0; i < per_problem; ++i) {
      const ManifoldPoint p = random_point(m, rng, 2.0);
      const ManifoldPoint q = random_point(m, rng, 2.0);
      const TangentVector u = random_tangent(p, rng, 1.0);
      const double h = 1e-5;
      const Vec fp = F.eval(exp(scale(u, h)));
      const Vec fm = F.eval(exp(scale(u, -h)));
      const auto grads = F.gradients(p);
      for (int k = 0; k < F.m(); ++k) {
        const double fd = (fp(k) - fm(k)) / (2 * h);
        const double an = inner(grads[static_cast<std::size_t>(k)], u);
        gradients.upper(std::abs(fd - an) / std::max(1.0, std::abs(an)));
      }

      const ScalarizationDirection e = random_direction(prob.Z, rng);
      const TangentVector w = scalarized_subgradient(F, p, e, prob.Z);
      const double fp_val = scalarize(F.eval(p), e, prob.Z).value;
      const double fq_val = scalarize(F.eval(q), e, prob.Z).value;
      inequality.upper(fp_val + inner(w, log(p, q)) - fq_val);

      // Directional derivative where the max has a clear winner.
      const Vec y = F.eval(p);
      std::vector<double> ratios;
      for (std::size_t j = 0; j < prob.Z.size(); ++j) ratios.push_back(y.dot(prob.Z[j]) / e.weights()[j]);
      std::sort(ratios.rbegin(), ratios.rend());
      if (ratios.size() == 1 || ratios[0] - ratios[1] > 1e-3) {
        const double d_fd = (scalarize(fp, e, prob.Z).value - scalarize(fm, e, prob.Z).value) / (2 * h);
        const double d_an = inner(w, u);
        danskin.upper(std::abs(d_fd - d_an) / std::max(1.0, std::abs(d_an)));
      }
    }
    convex_audit.upper(c_convexity_audit(F, prob.Z, 200, rng()).worst_violation);
  }
  for (const ManifoldId& m : test_manifolds()) {
    const auto bad = builtin::concave_pair_problem(m);
    concave_detected.require(!c_convexity_audit(bad.objective, bad.Z, 200, rng()).passed());
  }

  CheckReport report;
  for (Property* p : {&gradients, &inequality, &danskin, &convex_audit, &concave_detected}) {
    report.results.push_back(p->done());
  }
  report.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return report;
}

CheckReport check_fejer(std::uint64_t seed, int runs) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  const std::string s = "fejer";
  Property descent(s, "c_descent", 1e-10);
  Property lyapunov(s, "scalarized_lyapunov", 1e-10);
  Property fejer(s, "fejer_monotone_vs_limit", 1e-10);
  Property bounded(s, "bounded_by_witness", 0);
  Property efficiency(s, "terminal_weak_efficiency", 1e-3);
  Property status(s, "step_converged", 0);

  for (int r = 0; r < runs; ++r) {
    const ManifoldId m = r % 2 == 0 ? ManifoldId::euclidean(2) : ManifoldId::hyperboloid(2);
    const ProblemInstance prob =
        builtin::anchor_problem(m, {random_point(m, rng, 1.0), random_point(m, rng, 1.0)});
    const ManifoldPoint p0 = random_point(m, rng, 2.0);
    OuterConfig cfg;
    cfg.seed = seed;
    const SolveTrace trace = run(prob, p0, cfg);
    status.require(trace.status == RunStatus::kStepConverged);
    const DescentReport d = descent_audit(trace, prob.Z);
    descent.upper(d.worst_descent_violation);
    lyapunov.upper(d.worst_lyapunov_violation);
    const FejerReport f = fejer_audit(trace, prob, trace.last().point, 1e-10);
    fejer.require(f.witness_dominates);
    fejer.upper(f.worst_increase);
    bounded.require(f.bounded);
    efficiency.upper(prob.distance_to_efficient_set(trace.last().point));
  }

  CheckReport report;
  for (Property* p : {&descent, &lyapunov, &fejer, &bounded, &efficiency, &status}) report.results.push_back(p->done());
  report.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return report;
}

CheckReport check_sharpness(std::uint64_t seed) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  const std::string s = "sharpness";
  Property sharp(s, "norm_modulus_is_one", 1e-6);
  Property flat(s, "sq_norm_modulus_vanishes", 1e-2);
  Property transfer(s, "scalar_transfer", 0);
  Property scalar_forms(s, "scalar_forms_agree", 1e-12);

  const ManifoldId m = ManifoldId::euclidean(2);
  const ManifoldPoint o = origin(m);
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
  std::uniform_real_distribution<double> radius(1e-4, 2.0);
  std::uniform_real_distribution<double> small(1e-5, 1e-2);
  std::vector<ManifoldPoint> probes, near_probes;
  for (int i = 0; i < 256; ++i) {
    const double a = angle(rng), r = radius(rng), rs = small(rng);
    probes.push_back(lift_point(m, Vec{{r * std::cos(a), r * std::sin(a)}}));
    near_probes.push_back(lift_point(m, Vec{{rs * std::cos(a), rs * std::sin(a)}}));
  }
  auto to_origin = [o](const ManifoldPoint& p) { return dist(p, o); };
  const GeneratorSet scalar = GeneratorSet::scalar();

  SharpnessQuery q_sharp{builtin::weighted_norms(m, {1.0}), o, {}, to_origin, probes, scalar};
  sharp.upper(std::abs(estimate_sharpness_modulus(q_sharp).tau - 1.0));

  SharpnessQuery q_flat{builtin::weighted_sq_norms(m, {1.0}), o, {}, to_origin, near_probes, scalar};
  flat.upper(estimate_sharpness_modulus(q_flat).tau);

  const GeneratorSet orth = GeneratorSet::orthant(2);
  SharpnessQuery q_pair{builtin::weighted_norms(m, {1.0, 2.0}), o, {}, to_origin, probes, orth};
  const TransferReport tr = scalar_transfer_audit(q_pair, ScalarizationDirection(Vec::Ones(2), orth), orth);
  transfer.require(tr.passed && tr.hypothesis_met);
  const TransferReport ts = scalar_transfer_audit(q_sharp, ScalarizationDirection(Vec::Ones(1), scalar), scalar);
  transfer.require(ts.passed && ts.hypothesis_met);

  // Cone-distance form vs the plain scalar inequality for m = 1.
  for (const ManifoldPoint& p : probes) {
    const double gap = q_sharp.objective.eval(p)(0) - q_sharp.objective.eval(o)(0);
    scalar_forms.upper(std::abs(dist_to_neg_cone(Vec::Constant(1, gap), scalar) / to_origin(p) -
                                gap / to_origin(p)));
  }

  CheckReport report;
  for (Property* p : {&sharp, &flat, &transfer, &scalar_forms}) report.results.push_back(p->done());
  report.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return report;
}

CheckReport run_suite(const std::string& name, std::uint64_t seed, const GeometryCheckOptions& geometry) {
  if (name == "geometry") return check_geometry(seed, geometry);
  if (name == "scalarization") return check_scalarization(seed);
  if (name == "subgradient") return check_subgradient(seed);
  if (name == "fejer") return check_fejer(seed);
  if (name == "sharpness") return check_sharpness(seed);
  if (name == "all") {
    CheckReport all;
    for (const std::string& n : suite_names()) {
      if (n == "all") continue;
      const CheckReport r = run_suite(n, seed, geometry);
      all.results.insert(all.results.end(), r.results.begin(), r.results.end());
      all.seconds += r.seconds;
    }
    return all;
  }
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace hadprox
