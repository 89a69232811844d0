#include "hadprox/config.hpp"
#include "hadprox/trace_io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace hadprox;
using nlohmann::json;

namespace {

json base() {
  return json{{"manifold", {{"kind", "euclidean"}, {"dim", 2}}},
              {"problem", {{"name", "squared_distances"}, {"anchors", {{0, 0}, {1, 1}}}, {"start", {2, -1}}}}};
}

}  // namespace

TEST(Config, DefaultsFromMinimalConfig) {
  const RunConfig c = parse_config(base());
  EXPECT_EQ(c.manifold, ManifoldId::euclidean(2));
  EXPECT_EQ(c.cone.kind, "orthant");
  EXPECT_EQ(c.outer.inner.method, InnerMethod::kSqp);
  EXPECT_EQ(c.outer.lambda.values, std::vector<double>{1.0});
  EXPECT_EQ(c.output.trace_csv, "trace.csv");
  EXPECT_NO_THROW(validate_config(c));
  EXPECT_EQ(build_generator_set(c).m(), 2);
}

TEST(Config, RoundTrip) {
  json j = base();
  j["outer"] = {{"lambda", {{"kind", "sequence"}, {"values", {0.5, 1.0, 2.0}}}},
                {"direction", {{"kind", "cyclic"}, {"list", {{0.6, 0.8}, {0.8, 0.6}}}}},
                {"max_outer", 40},
                {"seed", 9}};
  j["inner"] = {{"method", "subgradient"}, {"stall_iters", 100}};
  j["output"] = {{"record_wall_clock", true}};
  const RunConfig a = parse_config(j);
  const RunConfig b = parse_config(to_json(a));
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(b.outer.lambda.values, (std::vector<double>{0.5, 1.0, 2.0}));
  EXPECT_TRUE(b.outer.directions.cyclic);
  EXPECT_EQ(b.outer.inner.method, InnerMethod::kSubgradient);
  EXPECT_EQ(b.outer.inner.stall_iters, 100);
  EXPECT_TRUE(b.outer.record_wall_clock);
  EXPECT_EQ(b.outer.seed, 9u);
}

TEST(Config, UnknownKeysRejectedEverywhere) {
  for (const char* section : {"", "manifold", "problem", "outer", "inner", "output"}) {
    json j = base();
    if (*section) {
      j[section]["bogus"] = 1;
    } else {
      j["bogus"] = 1;
    }
    EXPECT_THROW(parse_config(j), ConfigError) << section;
  }
}

TEST(Config, BadValuesRejected) {
  json j = base();
  j["inner"] = {{"method", "newton"}};
  EXPECT_THROW(parse_config(j), ConfigError);
  j = base();
  j["outer"] = {{"max_outer", "many"}};
  EXPECT_THROW(parse_config(j), ConfigError);
  j = base();
  j["outer"] = {{"lambda", {{"kind", "constant"}, {"value", 0.0}}}};
  EXPECT_THROW(validate_config(parse_config(j)), ConfigError);
  j = base();
  j["problem"]["start"] = {1, 2, 3};
  EXPECT_THROW(validate_config(parse_config(j)), ConfigError);
  j = base();
  j.erase("problem");
  EXPECT_THROW(parse_config(j), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, HyperboloidSpatialCoordinatesAreLifted) {
  json j = base();
  j["manifold"] = {{"kind", "hyperboloid"}, {"dim", 2}};
  const RunConfig c = parse_config(j);
  EXPECT_NO_THROW(validate_config(c));
  const ManifoldPoint s = start_point(c);
  EXPECT_NEAR(s.coords[0], std::sqrt(6.0), 1e-15);
  EXPECT_EQ(s.coords.tail(2), (Vec{{2, -1}}));
  // Full ambient coordinates are accepted too.
  const ManifoldPoint full = config_point(c.manifold, Vec{{std::sqrt(6.0), 2, -1}});
  EXPECT_NEAR((full.coords - s.coords).norm(), 0.0, 1e-15);
  EXPECT_THROW(config_point(c.manifold, Vec{{1.0, 2, -1}}), GeometryError);
}

TEST(TraceIo, CsvRoundTrip) {
  const auto H = ManifoldId::hyperboloid(2);
  RunConfig c = parse_config(base());
  c.manifold = H;
  const SolveTrace t = run(build_problem(c), start_point(c), c.outer);
  const std::string csv = trace_csv(t);
  std::istringstream in(csv);
  const SolveTrace back = read_trace_csv(in, H, t.m);
  ASSERT_EQ(back.records.size(), t.records.size());
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    EXPECT_EQ(back.records[k].point.coords, t.records[k].point.coords);
    EXPECT_EQ(back.records[k].values, t.records[k].values);
    EXPECT_EQ(back.records[k].f_value, t.records[k].f_value);
    EXPECT_EQ(back.records[k].step, t.records[k].step);
    EXPECT_EQ(back.records[k].inner_iterations, t.records[k].inner_iterations);
  }
  EXPECT_EQ(trace_csv(back), csv);
  std::istringstream wrong(csv);
  EXPECT_THROW(read_trace_csv(wrong, ManifoldId::hyperboloid(3), t.m), std::invalid_argument);
}

TEST(TraceIo, FormatRealKeepsSeventeenDigits) {
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_real(x)), x);
  EXPECT_EQ(format_real(1.0), "1.0000000000000000e+00");
}

TEST(TraceIo, ResultJson) {
  const RunConfig c = parse_config(base());
  const SolveTrace t = run(build_problem(c), start_point(c), c.outer);
  const json r = result_json(t);
  EXPECT_EQ(r["schema_version"], "1");
  EXPECT_EQ(r["status"], "step_converged");
  EXPECT_EQ(r["iterations"], t.iterations());
  EXPECT_EQ(r["terminal_point"].size(), 2u);
}

TEST(TraceIo, PointList) {
  std::istringstream in("# comment\n0,0\n1.5,-2\n");
  const auto pts = read_point_list_csv(in, ManifoldId::euclidean(2));
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[1].coords, (Vec{{1.5, -2}}));
  std::istringstream bad("1,2,3\n");
  EXPECT_THROW(read_point_list_csv(bad, ManifoldId::euclidean(2)), std::invalid_argument);
}
