#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nashnet/experiment.hpp"

namespace nashnet {

namespace {

using json = nlohmann::json;
using Index = Eigen::Index;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::kConfig, "config key '" + path + "': " + message);
}

// Object view that records which keys were read so leftovers can be
// rejected.
class Node {
 public:
  Node(const json& value, std::string path)
      : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return value_.contains(key); }

  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& raw(const std::string& key) {
    if (!has(key)) fail(child_path(key), "missing required key");
    used_.insert(key);
    return value_.at(key);
  }

  Node object(const std::string& key) { return Node(raw(key), child_path(key)); }

  double real(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail(child_path(key), "expected a number");
    return v.get<double>();
  }
  double real(const std::string& key, double fallback) {
    return has(key) ? real(key) : fallback;
  }

  std::uint64_t count(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      fail(child_path(key), "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(child_path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(child_path(key), "expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }

  void finish() const {
    for (auto it = value_.begin(); it != value_.end(); ++it) {
      if (!used_.count(it.key())) fail(child_path(it.key()), "unknown key");
    }
  }

 private:
  const json& value_;
  std::string path_;
  std::set<std::string> used_;
};

double bound_value(const json& v, const std::string& path, bool upper) {
  const double inf = std::numeric_limits<double>::infinity();
  if (v.is_null()) return upper ? inf : -inf;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return inf;
    if (s == "-inf") return -inf;
    fail(path, "unrecognized bound '" + s + "'");
  }
  if (!v.is_number()) fail(path, "expected a number, null or \"inf\"");
  return v.get<double>();
}

Vector vector_of(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) {
      fail(path + "[" + std::to_string(k) + "]", "expected a number");
    }
    out(static_cast<Index>(k)) = v[k].get<double>();
  }
  return out;
}

Vector bounds_of(const json& v, const std::string& path, bool upper) {
  if (!v.is_array()) fail(path, "expected an array");
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    out(static_cast<Index>(k)) =
        bound_value(v[k], path + "[" + std::to_string(k) + "]", upper);
  }
  return out;
}

Matrix matrix_of(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t rows = v.size();
  if (!v[0].is_array()) fail(path + "[0]", "expected an array");
  const std::size_t cols = v[0].size();
  Matrix out(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || v[r].size() != cols) {
      fail(row_path, "expected a row of " + std::to_string(cols) + " numbers");
    }
    out.row(static_cast<Index>(r)) = vector_of(v[r], row_path).transpose();
  }
  return out;
}

std::vector<std::size_t> dims_of(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number_integer() || v[k].get<std::int64_t>() <= 0) {
      fail(path + "[" + std::to_string(k) + "]", "expected a positive integer");
    }
    out.push_back(v[k].get<std::size_t>());
  }
  return out;
}

std::vector<Vector> vectors_of(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of arrays");
  std::vector<Vector> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(vector_of(v[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Range range_of(Node& node, const std::string& key, Range fallback) {
  if (!node.has(key)) return fallback;
  const std::string path = node.child_path(key);
  const Vector v = vector_of(node.raw(key), path);
  if (v.size() != 2 || !(v(0) <= v(1))) fail(path, "expected [lo, hi] with lo <= hi");
  return {v(0), v(1)};
}

GraphConfig parse_graph(Node node) {
  GraphConfig out;
  if (node.has("weights") == node.has("generator")) {
    fail(node.child_path("weights"), "give exactly one of 'weights' or 'generator'");
  }
  if (node.has("weights")) {
    out = matrix_of(node.raw("weights"), node.child_path("weights"));
  } else {
    Node gen = node.object("generator");
    GraphGenerator g;
    g.topology = gen.text("topology");
    if (g.topology != "ring" && g.topology != "random-strongly-connected") {
      fail(gen.child_path("topology"),
           "expected 'ring' or 'random-strongly-connected'");
    }
    g.agents = gen.count("N");
    if (g.agents == 0) fail(gen.child_path("N"), "need at least one agent");
    g.seed = gen.count("seed", 0);
    g.edge_probability = gen.real("edge_probability", g.edge_probability);
    g.min_self_weight = gen.real("min_self_weight", g.min_self_weight);
    g.self_weight = gen.real("self_weight", g.self_weight);
    gen.finish();
    out = g;
  }
  node.finish();
  return out;
}

GameConfig parse_game(Node node) {
  const std::string type = node.text("type");
  GameConfig out;
  if (type == "quadratic") {
    QuadraticConfig q;
    q.dims = dims_of(node.raw("dims"), node.child_path("dims"));
    q.G = matrix_of(node.raw("G"), node.child_path("G"));
    q.g = vector_of(node.raw("g"), node.child_path("g"));
    const Index n = q.g.size();
    const double inf = std::numeric_limits<double>::infinity();
    q.lower = node.has("lower")
                  ? bounds_of(node.raw("lower"), node.child_path("lower"), false)
                  : Vector::Constant(n, -inf);
    q.upper = node.has("upper")
                  ? bounds_of(node.raw("upper"), node.child_path("upper"), true)
                  : Vector::Constant(n, inf);
    out = std::move(q);
  } else if (type == "cournot" && node.has("participation")) {
    CournotSpec s;
    const json& part = node.raw("participation");
    const std::string part_path = node.child_path("participation");
    if (!part.is_array()) fail(part_path, "expected an array of market lists");
    for (std::size_t i = 0; i < part.size(); ++i) {
      const std::string p = part_path + "[" + std::to_string(i) + "]";
      if (!part[i].is_array()) fail(p, "expected an array of market indices");
      std::vector<std::size_t> list;
      for (const json& k : part[i]) {
        if (!k.is_number_integer() || k.get<std::int64_t>() < 0) {
          fail(p, "expected nonnegative integer market indices");
        }
        list.push_back(k.get<std::size_t>());
      }
      s.participation.push_back(std::move(list));
    }
    s.firms = s.participation.size();
    s.production_cost =
        vectors_of(node.raw("production_cost"), node.child_path("production_cost"));
    s.qi_cost = vectors_of(node.raw("qi_cost"), node.child_path("qi_cost"));
    s.capacity = vectors_of(node.raw("capacity"), node.child_path("capacity"));
    s.price_intercept =
        vector_of(node.raw("price_intercept"), node.child_path("price_intercept"));
    s.price_slope = vector_of(node.raw("price_slope"), node.child_path("price_slope"));
    s.markets = static_cast<std::size_t>(s.price_intercept.size());
    if (node.has("m") && node.count("m") != s.markets) {
      fail(node.child_path("m"), "does not match the length of price_intercept");
    }
    if (node.has("N") && node.count("N") != s.firms) {
      fail(node.child_path("N"), "does not match the participation list");
    }
    out = std::move(s);
  } else if (type == "cournot") {
    RandomCournotConfig c;
    c.firms = node.count("N", c.firms);
    c.markets = node.count("m", c.markets);
    c.total_decisions = node.count("n", c.total_decisions);
    c.seed = node.count("seed", 0);
    if (node.has("ranges")) {
      Node r = node.object("ranges");
      c.ranges.production_cost = range_of(r, "production_cost", c.ranges.production_cost);
      c.ranges.qi_cost = range_of(r, "qi_cost", c.ranges.qi_cost);
      c.ranges.price_intercept = range_of(r, "price_intercept", c.ranges.price_intercept);
      c.ranges.price_slope = range_of(r, "price_slope", c.ranges.price_slope);
      c.ranges.capacity = range_of(r, "capacity", c.ranges.capacity);
      r.finish();
    }
    out = c;
  } else if (type == "random_quadratic") {
    RandomQuadraticConfig r;
    r.dims = dims_of(node.raw("dims"), node.child_path("dims"));
    r.seed = node.count("seed", 0);
    r.options.mu = node.real("mu", r.options.mu);
    r.options.coupling = node.real("coupling", r.options.coupling);
    r.options.box_halfwidth = node.real("box_halfwidth", r.options.box_halfwidth);
    out = std::move(r);
  } else {
    fail(node.child_path("type"),
         "expected 'quadratic', 'cournot' or 'random_quadratic', got '" + type + "'");
  }
  node.finish();
  return out;
}

StepConfig parse_step(Node node) {
  StepConfig s;
  const std::string mode = node.text("mode", "auto");
  if (mode == "auto") {
    s.mode = StepConfig::Mode::kAuto;
  } else if (mode == "fixed") {
    s.mode = StepConfig::Mode::kFixed;
    s.value = node.real("value");
    if (!(s.value >= 0.0)) fail(node.child_path("value"), "must be >= 0");
  } else if (mode == "harmonic") {
    s.mode = StepConfig::Mode::kHarmonic;
  } else if (mode == "fixed-multiple") {
    s.mode = StepConfig::Mode::kFixedMultiple;
    s.factor = node.real("factor");
    if (!(s.factor > 0.0)) fail(node.child_path("factor"), "must be > 0");
  } else {
    fail(node.child_path("mode"),
         "expected 'auto', 'fixed', 'harmonic' or 'fixed-multiple'");
  }
  node.finish();
  return s;
}

ToleranceConfig parse_tolerances(Node node) {
  ToleranceConfig t;
  auto positive = [&node](const std::string& key, double fallback) {
    const double v = node.real(key, fallback);
    if (!(v > 0.0)) fail(node.child_path(key), "must be > 0");
    return v;
  };
  t.row_sum = positive("row_sum", t.row_sum);
  t.eigen = positive("eigen", t.eigen);
  t.step_margin = positive("step_margin", t.step_margin);
  t.oracle = positive("oracle", t.oracle);
  t.stop = node.real("stop", t.stop);
  if (!(t.stop >= 0.0)) fail(node.child_path("stop"), "must be >= 0");
  node.finish();
  return t;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  Node root(doc, "");
  ExperimentConfig cfg;
  cfg.graph = parse_graph(root.object("graph"));
  cfg.game = parse_game(root.object("game"));

  const std::string algorithm = root.text("algorithm", "alg1");
  if (algorithm == "alg1") {
    cfg.algorithm = Algorithm::kKnownEigenvector;
  } else if (algorithm == "alg2") {
    cfg.algorithm = Algorithm::kOnlineEigenvector;
  } else {
    fail("algorithm", "expected 'alg1' or 'alg2'");
  }
  if (root.has("step")) cfg.step = parse_step(root.object("step"));
  cfg.max_iters = root.count("max_iters", cfg.max_iters);
  cfg.stop_on_tol = root.flag("stop_on_tol", cfg.stop_on_tol);
  const std::string thinning = root.text("trace_thinning", "none");
  if (thinning != "none" && thinning != "log2") {
    fail("trace_thinning", "expected 'none' or 'log2'");
  }
  cfg.log_thinning = thinning == "log2";
  if (root.has("tolerances")) cfg.tolerances = parse_tolerances(root.object("tolerances"));
  cfg.output_dir = root.text("output_dir", cfg.output_dir);
  root.finish();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace nashnet
