#include "hadprox/config.hpp"

#include <fstream>
#include <set>

namespace hadprox {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& section) {
  if (!obj.is_object()) throw ConfigError("section '" + section + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in section '" + section + "'");
  }
}

Vec to_vec(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + " must contain only numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

std::vector<Vec> to_vec_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of arrays");
  std::vector<Vec> out;
  for (const auto& row : j) out.push_back(to_vec(row, what));
  return out;
}

json from_vec(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json from_vec_list(const std::vector<Vec>& list) {
  json arr = json::array();
  for (const Vec& v : list) arr.push_back(from_vec(v));
  return arr;
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

InnerMethod parse_method(const std::string& s) {
  if (s == "sqp") return InnerMethod::kSqp;
  if (s == "subgradient") return InnerMethod::kSubgradient;
  if (s == "softmax") return InnerMethod::kSoftmax;
  throw ConfigError("inner.method must be 'sqp', 'subgradient' or 'softmax'");
}

}  // namespace

RunConfig parse_config(const json& j) {
  check_keys(j, {"schema_version", "manifold", "problem", "cone", "outer", "inner", "output"}, "root");
  RunConfig cfg;

  if (!j.contains("manifold")) throw ConfigError("missing section 'manifold'");
  const json& man = j.at("manifold");
  check_keys(man, {"kind", "dim"}, "manifold");
  const auto kind = get_or<std::string>(man, "kind", "euclidean");
  const int dim = get_or<int>(man, "dim", 2);
  if (dim < 1) throw ConfigError("manifold.dim must be >= 1");
  if (kind == "euclidean") {
    cfg.manifold = ManifoldId::euclidean(dim);
  } else if (kind == "hyperboloid") {
    cfg.manifold = ManifoldId::hyperboloid(dim);
  } else {
    throw ConfigError("manifold.kind must be 'euclidean' or 'hyperboloid'");
  }

  if (!j.contains("problem")) throw ConfigError("missing section 'problem'");
  const json& prob = j.at("problem");
  check_keys(prob, {"name", "anchors", "start"}, "problem");
  cfg.problem.name = get_or<std::string>(prob, "name", "squared_distances");
  if (prob.contains("anchors")) cfg.problem.anchors = to_vec_list(prob.at("anchors"), "problem.anchors");
  if (!prob.contains("start")) throw ConfigError("problem.start is required");
  cfg.problem.start = to_vec(prob.at("start"), "problem.start");

  if (j.contains("cone")) {
    const json& cone = j.at("cone");
    check_keys(cone, {"kind", "generators"}, "cone");
    cfg.cone.kind = get_or<std::string>(cone, "kind", "orthant");
    if (cone.contains("generators")) cfg.cone.generators = to_vec_list(cone.at("generators"), "cone.generators");
  }

  if (j.contains("outer")) {
    const json& outer = j.at("outer");
    check_keys(outer, {"lambda", "lambda_max", "direction", "tol_step", "max_outer", "seed"}, "outer");
    OuterConfig& o = cfg.outer;
    if (outer.contains("lambda")) {
      const json& lam = outer.at("lambda");
      check_keys(lam, {"kind", "value", "values"}, "outer.lambda");
      const auto lk = get_or<std::string>(lam, "kind", "constant");
      if (lk == "constant") {
        o.lambda.values = {get_or<double>(lam, "value", 1.0)};
      } else if (lk == "sequence") {
        if (!lam.contains("values")) throw ConfigError("outer.lambda.values is required for a sequence");
        const Vec v = to_vec(lam.at("values"), "outer.lambda.values");
        o.lambda.values.assign(v.data(), v.data() + v.size());
      } else {
        throw ConfigError("outer.lambda.kind must be 'constant' or 'sequence'");
      }
    }
    o.lambda.lambda_max = get_or<double>(outer, "lambda_max", o.lambda.lambda_max);
    if (outer.contains("direction")) {
      const json& dir = outer.at("direction");
      check_keys(dir, {"kind", "e", "list"}, "outer.direction");
      const auto dk = get_or<std::string>(dir, "kind", "uniform");
      if (dk == "fixed") {
        if (!dir.contains("e")) throw ConfigError("outer.direction.e is required for 'fixed'");
        o.directions = {false, {to_vec(dir.at("e"), "outer.direction.e")}};
      } else if (dk == "cyclic") {
        if (!dir.contains("list")) throw ConfigError("outer.direction.list is required for 'cyclic'");
        o.directions = {true, to_vec_list(dir.at("list"), "outer.direction.list")};
        if (o.directions.directions.empty()) throw ConfigError("outer.direction.list is empty");
      } else if (dk != "uniform") {
        throw ConfigError("outer.direction.kind must be 'uniform', 'fixed' or 'cyclic'");
      }
    }
    o.tol_step = get_or<double>(outer, "tol_step", o.tol_step);
    o.max_outer = get_or<int>(outer, "max_outer", o.max_outer);
    o.seed = get_or<std::uint64_t>(outer, "seed", o.seed);
  }

  if (j.contains("inner")) {
    const json& in = j.at("inner");
    check_keys(in, {"max_iters", "tol_opt", "tol_feas", "step_constant", "window", "stall_iters", "method"},
               "inner");
    InnerConfig& c = cfg.outer.inner;
    c.max_iters = get_or<int>(in, "max_iters", c.max_iters);
    c.tol_opt = get_or<double>(in, "tol_opt", c.tol_opt);
    c.tol_feas = get_or<double>(in, "tol_feas", c.tol_feas);
    c.step_constant = get_or<double>(in, "step_constant", c.step_constant);
    c.window = get_or<int>(in, "window", c.window);
    c.stall_iters = get_or<int>(in, "stall_iters", c.stall_iters);
    c.method = parse_method(get_or<std::string>(in, "method", to_string(c.method)));
  }

  if (j.contains("output")) {
    const json& out = j.at("output");
    check_keys(out, {"trace_csv", "result_json", "record_wall_clock"}, "output");
    cfg.output.trace_csv = get_or<std::string>(out, "trace_csv", cfg.output.trace_csv);
    cfg.output.result_json = get_or<std::string>(out, "result_json", cfg.output.result_json);
    cfg.output.record_wall_clock = get_or<bool>(out, "record_wall_clock", false);
  }
  cfg.outer.record_wall_clock = cfg.output.record_wall_clock;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  json j;
  j["schema_version"] = "1";
  j["manifold"] = {{"kind", cfg.manifold.kind == Geometry::kEuclidean ? "euclidean" : "hyperboloid"},
                   {"dim", cfg.manifold.dim}};
  j["problem"] = {{"name", cfg.problem.name},
                  {"anchors", from_vec_list(cfg.problem.anchors)},
                  {"start", from_vec(cfg.problem.start)}};
  j["cone"] = {{"kind", cfg.cone.kind}, {"generators", from_vec_list(cfg.cone.generators)}};

  const OuterConfig& o = cfg.outer;
  json lambda;
  if (o.lambda.values.size() == 1) {
    lambda = {{"kind", "constant"}, {"value", o.lambda.values.front()}};
  } else {
    lambda = {{"kind", "sequence"}, {"values", o.lambda.values}};
  }
  json direction;
  if (o.directions.directions.empty()) {
    direction = {{"kind", "uniform"}};
  } else if (!o.directions.cyclic) {
    direction = {{"kind", "fixed"}, {"e", from_vec(o.directions.directions.front())}};
  } else {
    direction = {{"kind", "cyclic"}, {"list", from_vec_list(o.directions.directions)}};
  }
  j["outer"] = {{"lambda", lambda},         {"lambda_max", o.lambda.lambda_max},
                {"direction", direction},   {"tol_step", o.tol_step},
                {"max_outer", o.max_outer}, {"seed", o.seed}};
  const InnerConfig& c = o.inner;
  j["inner"] = {{"max_iters", c.max_iters},     {"tol_opt", c.tol_opt},
                {"tol_feas", c.tol_feas},       {"step_constant", c.step_constant},
                {"window", c.window},           {"stall_iters", c.stall_iters},
                {"method", to_string(c.method)}};
  j["output"] = {{"trace_csv", cfg.output.trace_csv},
                 {"result_json", cfg.output.result_json},
                 {"record_wall_clock", cfg.output.record_wall_clock}};
  return j;
}

GeneratorSet build_generator_set(const RunConfig& cfg) {
  const std::string& k = cfg.cone.kind;
  if (k == "scalar") return GeneratorSet::scalar();
  if (k == "custom") {
    try {
      return GeneratorSet::custom(cfg.cone.generators);
    } catch (const ConeError& e) {
      throw ConfigError(std::string("cone: ") + e.what());
    }
  }
  if (k != "orthant") throw ConfigError("cone.kind must be 'scalar', 'orthant' or 'custom'");
  const auto& name = cfg.problem.name;
  int m = static_cast<int>(cfg.problem.anchors.size());
  if (name == "scalar_quadratic") m = 1;
  if (name == "concave_pair") m = 2;
  if (m < 1) throw ConfigError("cannot size the orthant: problem has no components");
  return GeneratorSet::orthant(m);
}

// Hyperboloid points may be given by their n spatial coordinates.
ManifoldPoint config_point(const ManifoldId& m, const Vec& coords) {
  if (m.kind == Geometry::kHyperboloid && coords.size() == m.dim) return lift_point(m, coords);
  return make_point(m, coords);
}

ProblemInstance build_problem(const RunConfig& cfg) {
  const auto& name = cfg.problem.name;
  try {
    ProblemInstance p = [&] {
      if (name == "scalar_quadratic") return builtin::scalar_quadratic_problem(cfg.manifold);
      if (name == "concave_pair") return builtin::concave_pair_problem(cfg.manifold);
      if (name == "squared_distances") {
        std::vector<ManifoldPoint> anchors;
        for (const Vec& a : cfg.problem.anchors) anchors.push_back(config_point(cfg.manifold, a));
        if (anchors.empty()) throw ConfigError("problem.anchors must be non-empty");
        return builtin::anchor_problem(cfg.manifold, std::move(anchors));
      }
      throw ConfigError("unknown builtin problem '" + name + "'");
    }();
    GeneratorSet Z = build_generator_set(cfg);
    if (Z.m() != p.objective.m()) {
      throw ConfigError("cone dimension " + std::to_string(Z.m()) + " does not match the " +
                        std::to_string(p.objective.m()) + " objective components");
    }
    p.Z = std::move(Z);
    return p;
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
}

ManifoldPoint start_point(const RunConfig& cfg) {
  try {
    return config_point(cfg.manifold, cfg.problem.start);
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("problem.start: ") + e.what());
  }
}

void validate_config(const RunConfig& cfg) {
  const ProblemInstance p = build_problem(cfg);
  start_point(cfg);
  try {
    validate(cfg.outer, p.Z);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("outer: ") + e.what());
  }
}

}  // namespace hadprox
