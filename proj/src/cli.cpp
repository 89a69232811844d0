#include "hadprox/cli.hpp"

#include "hadprox/checks.hpp"
#include "hadprox/config.hpp"
#include "hadprox/flat_reduction.hpp"
#include "hadprox/proxpoint.hpp"
#include "hadprox/trace_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

namespace hadprox::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kCompareTol = 1e-6;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::kStepConverged:
      return kOk;
    case RunStatus::kMaxOuter:
      return kMaxOuter;
    case RunStatus::kInnerFailure:
      return kInnerFailure;
  }
  return kConfigError;
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
            bool verbose, Streams io) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (seed) cfg.outer.seed = *seed;
    validate_config(cfg);
    ensure_dir(out_dir);
  } catch (const std::exception& e) {
    io.err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  const ProblemInstance problem = build_problem(cfg);
  InnerObserver observer;
  if (verbose) {
    observer = [&io](const InnerStep& s) {
      io.err << "inner t=" << s.iteration << " phi=" << format_real(s.phi)
             << " g=" << format_real(s.feasibility) << (s.constraint_step ? " constraint" : "") << '\n';
    };
  }
  const SolveTrace trace = run(problem, start_point(cfg), cfg.outer, observer);

  nlohmann::json result = result_json(trace);
  const DescentReport d = descent_audit(trace, problem.Z);
  result["audits"]["descent"] = {{"passed", d.passed()},
                                 {"worst_descent_violation", d.worst_descent_violation},
                                 {"worst_lyapunov_violation", d.worst_lyapunov_violation}};
  const ManifoldPoint witness = problem.a2_witness.value_or(trace.last().point);
  const FejerReport f = fejer_audit(trace, problem, witness, 1e-10);
  result["audits"]["fejer"] = {{"witness", problem.a2_witness ? "a2_witness" : "terminal_iterate"},
                               {"witness_dominates", f.witness_dominates},
                               {"monotone", f.monotone},
                               {"bounded", f.bounded},
                               {"passed", f.passed()},
                               {"worst_increase", f.worst_increase}};
  if (problem.distance_to_efficient_set) {
    result["audits"]["distance_to_efficient_set"] = problem.distance_to_efficient_set(trace.last().point);
  }
  try {
    write_file(fs::path(out_dir) / cfg.output.trace_csv, trace_csv(trace));
    write_file(fs::path(out_dir) / cfg.output.result_json, result.dump(2) + "\n");
  } catch (const std::exception& e) {
    io.err << "output error: " << e.what() << '\n';
    return kConfigError;
  }
  const IterationRecord& last = trace.last();
  io.out << "status=" << to_string(trace.status) << " iterations=" << trace.iterations()
         << " f_k=" << format_real(last.f_value) << " step=" << format_real(last.step) << '\n';
  return exit_code(trace.status);
}

int cmd_check(const std::string& suite, std::uint64_t seed, const std::string& report_path, Streams io) {
  CheckReport report;
  try {
    report = run_suite(suite, seed);
  } catch (const std::invalid_argument& e) {
    io.err << e.what() << " (expected one of geometry, scalarization, subgradient, fejer, sharpness, all)\n";
    return kConfigError;
  }
  nlohmann::json j = report.to_json();
  j["suite"] = suite;
  j["seed"] = seed;
  io.out << j.dump(2) << '\n';
  if (!report_path.empty()) {
    try {
      write_file(report_path, j.dump(2) + "\n");
    } catch (const std::exception& e) {
      io.err << e.what() << '\n';
      return kConfigError;
    }
  }
  return report.passed() ? kOk : kCheckFailed;
}

int cmd_compare(const std::string& config_path, const std::string& out_dir, Streams io) {
  RunConfig cfg;
  std::vector<Vec> anchors;
  try {
    cfg = load_config(config_path);
    validate_config(cfg);
    if (cfg.manifold.kind != Geometry::kEuclidean) {
      throw ConfigError("compare needs a Euclidean manifold (the flat reference is undefined elsewhere)");
    }
    const GeneratorSet Z = build_generator_set(cfg);
    if (Z.kind() == ConeKind::kCustom) throw ConfigError("compare needs the orthant cone");
    if (cfg.problem.name == "scalar_quadratic") {
      anchors = {Vec::Zero(cfg.manifold.dim)};
    } else if (cfg.problem.name == "squared_distances") {
      anchors = cfg.problem.anchors;
    } else {
      throw ConfigError("compare supports scalar_quadratic and squared_distances");
    }
    const auto& dirs = cfg.outer.directions;
    const Vec uniform = uniform_direction(Z).vec();
    if (dirs.cyclic && dirs.directions.size() > 1) throw ConfigError("compare needs a fixed direction");
    if (!dirs.directions.empty() && (dirs.directions.front() - uniform).norm() > 1e-12) {
      throw ConfigError("compare needs e = (1,...,1)/sqrt(m)");
    }
    if (cfg.outer.inner.method == InnerMethod::kSoftmax) {
      throw ConfigError("compare supports the sqp and subgradient inner methods");
    }
    ensure_dir(out_dir);
  } catch (const std::exception& e) {
    io.err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  const ProblemInstance problem = build_problem(cfg);
  const ManifoldPoint p0 = start_point(cfg);
  const SolveTrace general = run(problem, p0, cfg.outer);
  const SolveTrace flat = flat_prox_reference(anchors, p0.coords, cfg.outer);
  const TraceAgreement agreement = compare_traces(general, flat);

  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["agree"] = agreement.agrees(kCompareTol);
  j["tolerance"] = kCompareTol;
  j["same_length"] = agreement.same_length;
  j["iterates_compared"] = agreement.compared;
  j["max_distance"] = agreement.max_distance;
  j["worst_k"] = agreement.worst_k;
  j["general_status"] = to_string(general.status);
  j["flat_status"] = to_string(flat.status);
  try {
    write_file(fs::path(out_dir) / "trace_general.csv", trace_csv(general));
    write_file(fs::path(out_dir) / "trace_flat.csv", trace_csv(flat));
    write_file(fs::path(out_dir) / "compare.json", j.dump(2) + "\n");
  } catch (const std::exception& e) {
    io.err << "output error: " << e.what() << '\n';
    return kConfigError;
  }
  io.out << "agree=" << (agreement.agrees(kCompareTol) ? "true" : "false") << " iterates=" << agreement.compared
         << " max_distance=" << format_real(agreement.max_distance) << '\n';
  return agreement.agrees(kCompareTol) ? kOk : kCheckFailed;
}

int main(int argc, char** argv) {
  CLI::App app{"Proximal point method for vector optimization on Hadamard manifolds"};
  app.require_subcommand(1);

  std::string config, out = ".", suite = "all";
  std::uint64_t seed = 0;
  bool verbose = false;

  auto* run_cmd = app.add_subcommand("run", "Solve a problem described by a JSON config");
  run_cmd->add_option("--config", config, "config file")->required();
  run_cmd->add_option("--out", out, "output directory");
  auto* run_seed = run_cmd->add_option("--seed", seed, "override outer.seed");
  run_cmd->add_flag("--verbose", verbose, "print every inner iterate to stderr");

  auto* check_cmd = app.add_subcommand("check", "Run property suites");
  check_cmd->add_option("--suite", suite, "geometry|scalarization|subgradient|fejer|sharpness|all");
  check_cmd->add_option("--seed", seed, "random seed");
  std::string report;
  check_cmd->add_option("--out", report, "also write the JSON report here");

  auto* cmp_cmd = app.add_subcommand("compare", "Compare against the flat-space reference loop");
  cmp_cmd->add_option("--config", config, "config file")->required();
  cmp_cmd->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  Streams io{std::cout, std::cerr};
  if (*run_cmd) {
    return cmd_run(config, out, *run_seed ? std::optional<std::uint64_t>(seed) : std::nullopt, verbose, io);
  }
  if (*check_cmd) return cmd_check(suite, seed, report, io);
  return cmd_compare(config, out, io);
}

}  // namespace hadprox::cli
