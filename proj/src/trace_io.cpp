#include "hadprox/trace_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hadprox {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << "k,step,f_k_value,feas_residual,inner_iters,wall_ms";
  for (int i = 0; i < trace.m; ++i) out << ",F" << i;
  for (int i = 0; i < trace.manifold.ambient_dim(); ++i) out << ",x" << i;
  out << '\n';
  for (const IterationRecord& r : trace.records) {
    out << r.k << ',' << format_real(r.step) << ',' << format_real(r.f_value) << ','
        << format_real(r.feas_residual) << ',' << r.inner_iterations << ',' << format_real(r.wall_ms);
    for (Eigen::Index i = 0; i < r.values.size(); ++i) out << ',' << format_real(r.values(i));
    for (Eigen::Index i = 0; i < r.point.coords.size(); ++i) out << ',' << format_real(r.point.coords(i));
    out << '\n';
  }
}

std::string trace_csv(const SolveTrace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

SolveTrace read_trace_csv(std::istream& in, const ManifoldId& manifold, int m) {
  SolveTrace trace;
  trace.manifold = manifold;
  trace.m = m;
  const int d = manifold.ambient_dim();
  const std::size_t width = 6 + static_cast<std::size_t>(m + d);
  std::string line;
  if (!std::getline(in, line) || split(line).size() != width) {
    throw std::invalid_argument("trace CSV header does not match the manifold/objective sizes");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != width) throw std::invalid_argument("trace CSV row has the wrong width");
    IterationRecord r;
    r.k = std::stoi(c[0]);
    r.step = parse_real(c[1]);
    r.f_value = parse_real(c[2]);
    r.feas_residual = parse_real(c[3]);
    r.inner_iterations = std::stoi(c[4]);
    r.wall_ms = parse_real(c[5]);
    r.values.resize(m);
    for (int i = 0; i < m; ++i) r.values(i) = parse_real(c[6 + i]);
    Vec x(d);
    for (int i = 0; i < d; ++i) x(i) = parse_real(c[6 + m + i]);
    r.point = make_point(manifold, std::move(x));
    trace.records.push_back(std::move(r));
  }
  return trace;
}

nlohmann::json result_json(const SolveTrace& trace) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["status"] = to_string(trace.status);
  j["manifold"] = trace.manifold.name();
  j["iterations"] = trace.iterations();
  if (!trace.records.empty()) {
    const IterationRecord& last = trace.last();
    j["terminal_point"] = std::vector<double>(last.point.coords.data(),
                                              last.point.coords.data() + last.point.coords.size());
    j["terminal_values"] =
        std::vector<double>(last.values.data(), last.values.data() + last.values.size());
    j["final_f_value"] = last.f_value;
    j["final_step"] = last.step;
    int total_inner = 0;
    for (const auto& r : trace.records) total_inner += r.inner_iterations;
    j["inner_iterations_total"] = total_inner;
  }
  return j;
}

std::vector<ManifoldPoint> read_point_list_csv(std::istream& in, const ManifoldId& manifold) {
  std::vector<ManifoldPoint> points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto c = split(line);
    if (static_cast<int>(c.size()) != manifold.ambient_dim()) {
      throw std::invalid_argument("point row has " + std::to_string(c.size()) + " coordinates, expected " +
                                  std::to_string(manifold.ambient_dim()));
    }
    Vec x(manifold.ambient_dim());
    for (int i = 0; i < x.size(); ++i) x(i) = parse_real(c[static_cast<std::size_t>(i)]);
    points.push_back(make_point(manifold, std::move(x)));
  }
  return points;
}

}  // namespace hadprox
