#pragma once

#include "hadprox/proxpoint.hpp"

#include <iosfwd>
#include <string>

#include "json.hpp"

namespace hadprox {

inline constexpr const char* kSchemaVersion = "1";

/// Columns: k, step, f_k_value, feas_residual, inner_iters, wall_ms,
/// F0..F{m-1}, x0..x{d-1}. Reals in %.16e (17 significant digits).
void write_trace_csv(std::ostream& out, const SolveTrace& trace);
std::string trace_csv(const SolveTrace& trace);

/// Inverse of write_trace_csv for the columns it stores.
SolveTrace read_trace_csv(std::istream& in, const ManifoldId& manifold, int m);

/// Formats a real with 17 significant digits in scientific notation.
std::string format_real(double v);

/// Structured result: schema_version, status, terminal point, final values.
nlohmann::json result_json(const SolveTrace& trace);

/// One point per row, coordinates only.
std::vector<ManifoldPoint> read_point_list_csv(std::istream& in, const ManifoldId& manifold);

}  // namespace hadprox
