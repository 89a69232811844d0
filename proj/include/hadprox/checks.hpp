#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace hadprox {

struct PropertyResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double worst = 0;      // worst residual observed (sign convention per property)
  double threshold = 0;  // pass bound on `worst`
  std::size_t samples = 0;
};

struct CheckReport {
  std::vector<PropertyResult> results;
  double seconds = 0;

  bool passed() const;
  const PropertyResult& find(const std::string& name) const;
  nlohmann::json to_json() const;
};

struct GeometryCheckOptions {
  int samples = 1000;
  /// Coefficient of the inner-product term of the comparison inequality.
  /// 2 is correct; anything else should make the Euclidean property fail.
  double inner_coefficient = 2.0;
};

CheckReport check_geometry(std::uint64_t seed, const GeometryCheckOptions& opts = {});
CheckReport check_scalarization(std::uint64_t seed, int samples = 10000);
CheckReport check_subgradient(std::uint64_t seed, int samples = 1000);
CheckReport check_fejer(std::uint64_t seed, int runs = 4);
CheckReport check_sharpness(std::uint64_t seed);

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"geometry", "scalarization", "subgradient", "fejer",
                                              "sharpness", "all"};
  return names;
}

/// Runs a named suite ("all" runs every suite). Throws std::invalid_argument
/// for unknown names.
CheckReport run_suite(const std::string& name, std::uint64_t seed,
                      const GeometryCheckOptions& geometry = {});

}  // namespace hadprox
