#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace hadprox::cli {

// Exit codes shared by all verbs.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kMaxOuter = 2;
inline constexpr int kInnerFailure = 3;
inline constexpr int kCheckFailed = 4;

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Solves the configured problem; writes the trace CSV and result JSON into
/// out_dir. 0 step_converged, 2 max_outer, 3 inner_failure, 1 config error.
int cmd_run(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
            bool verbose, Streams io);

/// Runs a property suite and prints the JSON report (also written to
/// report_path when given). 0 iff every property passes; 1 unknown suite.
int cmd_check(const std::string& suite, std::uint64_t seed, const std::string& report_path, Streams io);

/// Runs the general solver and the flat-space reference on a Euclidean
/// orthant problem and compares iterates (1e-6). 0 agree, 4 disagree,
/// 1 config error or non-Euclidean config.
int cmd_compare(const std::string& config_path, const std::string& out_dir, Streams io);

int main(int argc, char** argv);

}  // namespace hadprox::cli
