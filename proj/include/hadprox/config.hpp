#pragma once

#include "hadprox/problem.hpp"
#include "hadprox/proxpoint.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace hadprox {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemSpec {
  std::string name = "squared_distances";  // | scalar_quadratic | concave_pair
  std::vector<Vec> anchors;                // ambient coordinates
  Vec start;                               // ambient coordinates
};

struct ConeSpec {
  std::string kind = "orthant";  // | scalar | custom
  std::vector<Vec> generators;   // custom only
};

struct OutputSpec {
  std::string trace_csv = "trace.csv";
  std::string result_json = "result.json";
  bool record_wall_clock = false;
};

/// Sections: manifold, problem, cone, outer, inner, output. Unknown keys are
/// rejected at every level.
struct RunConfig {
  ManifoldId manifold = ManifoldId::euclidean(2);
  ProblemSpec problem;
  ConeSpec cone;
  OuterConfig outer;
  OutputSpec output;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

GeneratorSet build_generator_set(const RunConfig& cfg);
/// Hyperboloid points may be written with n spatial coordinates (lifted to
/// the upper sheet) or with all n+1 ambient coordinates.
ManifoldPoint config_point(const ManifoldId& m, const Vec& coords);
ProblemInstance build_problem(const RunConfig& cfg);
ManifoldPoint start_point(const RunConfig& cfg);

/// Builds the problem, start point and outer config and checks every
/// module-level invariant; throws ConfigError with the reason.
void validate_config(const RunConfig& cfg);

}  // namespace hadprox
