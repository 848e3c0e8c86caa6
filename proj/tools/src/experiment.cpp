#include "riemhess/experiment/experiment.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "riemhess/errors.hpp"

namespace riemhess::experiment {

namespace {

using nlohmann::json;

struct KindInfo {
  ProblemKind kind;
  const char* name;
  const char* description;
  std::set<std::string> keys;         // allowed top-level keys besides the common ones
  std::set<std::string> metric_keys;  // allowed keys inside "metric"
  std::set<std::string> sweepable;
};

const std::vector<KindInfo>& kinds() {
  static const std::vector<KindInfo> table = {
      {ProblemKind::kRayleighStiefel, "rayleigh_stiefel",
       "Tr(Y^T A Y) on St(d, n) with the alpha metric; A random SPD",
       {"n", "d", "metric"}, {"alpha0", "alpha1"}, {"alpha", "n", "d", "seed"}},
      {ProblemKind::kFlagQuadratic, "flag_quadratic",
       "Tr((Y Lambda Y^T A)^2) on the flag manifold with blocks d_hat; A random SPD",
       {"n", "d", "blocks", "metric"}, {"alpha0", "alpha1"}, {"alpha", "n", "d", "seed"}},
      {ProblemKind::kWeightedPcaPsd, "weighted_pca_psd",
       "weighted low-rank approximation of A by Y P Y^T on fixed-rank PSD matrices",
       {"n", "p", "metric", "beta_schedule", "weights"}, {"alpha0", "alpha1", "beta"},
       {"alpha", "beta", "n", "p", "seed"}},
      {ProblemKind::kSpdLogdet, "spd_logdet",
       "Tr(A P) - log det P on SPD matrices with the affine-invariant metric",
       {"n"}, {}, {"n", "seed"}},
  };
  return table;
}

const KindInfo& info(ProblemKind k) {
  for (const auto& i : kinds())
    if (i.kind == k) return i;
  throw ConfigError("unknown problem kind");
}

const std::set<std::string> kCommonKeys = {"name", "problem", "seed", "solver", "solver_config",
                                           "sweep"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(fmt::format("{}: unknown key \"{}\"", where, key));
    }
  }
}

const json& require_object(const json& v, const std::string& where) {
  if (!v.is_object()) throw ConfigError(where + ": expected an object");
  return v;
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(fmt::format("\"{}\": expected an integer", key));
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(fmt::format("\"{}\": integer out of range", key));
  }
  return static_cast<int>(x);
}

double get_double(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(fmt::format("\"{}\": expected a number", key));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(fmt::format("\"{}\": expected a finite number", key));
  return x;
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(fmt::format("\"{}\": expected a string", key));
  return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(fmt::format("\"{}\": expected true or false", key));
  return v.get<bool>();
}

void parse_solver_config(const json& obj, SolverConfig& cfg) {
  require_object(obj, "solver_config");
  for (const auto& [key, v] : obj.items()) {
    if (key == "max_outer_iterations") cfg.max_outer_iterations = get_int(v, key);
    else if (key == "gradient_norm_tolerance") cfg.gradient_norm_tolerance = get_double(v, key);
    else if (key == "initial_radius") cfg.initial_radius = get_double(v, key);
    else if (key == "max_radius") cfg.max_radius = get_double(v, key);
    else if (key == "rho_accept") cfg.rho_accept = get_double(v, key);
    else if (key == "rho_expand") cfg.rho_expand = get_double(v, key);
    else if (key == "shrink_below") cfg.shrink_below = get_double(v, key);
    else if (key == "shrink_factor") cfg.shrink_factor = get_double(v, key);
    else if (key == "inner_max_iterations") cfg.inner_max_iterations = get_int(v, key);
    else if (key == "kappa") cfg.kappa = get_double(v, key);
    else if (key == "theta") cfg.theta = get_double(v, key);
    else if (key == "initial_step") cfg.initial_step = get_double(v, key);
    else if (key == "armijo_c") cfg.armijo_c = get_double(v, key);
    else if (key == "backtrack_factor") cfg.backtrack_factor = get_double(v, key);
    else if (key == "max_backtracks") cfg.max_backtracks = get_int(v, key);
    else if (key == "step_growth") cfg.step_growth = get_double(v, key);
    else if (key == "record_timing") cfg.record_timing = get_bool(v, key);
    else if (key == "point_tolerance") cfg.point_tolerance = get_double(v, key);
    else throw ConfigError(fmt::format("solver_config: unknown key \"{}\"", key));
  }
}

std::vector<BetaPhase> parse_schedule(const json& v) {
  if (!v.is_array() || v.empty()) throw ConfigError("beta_schedule: expected a nonempty array");
  std::vector<BetaPhase> out;
  for (const json& item : v) {
    require_object(item, "beta_schedule entry");
    reject_unknown(item, {"iteration", "value"}, "beta_schedule entry");
    if (!item.contains("iteration") || !item.contains("value")) {
      throw ConfigError("beta_schedule entry: needs \"iteration\" and \"value\"");
    }
    out.push_back({get_int(item.at("iteration"), "iteration"), get_double(item.at("value"), "value")});
  }
  if (out.front().iteration != 0) throw ConfigError("beta_schedule: first phase must start at iteration 0");
  for (size_t i = 1; i < out.size(); ++i) {
    if (out[i].iteration <= out[i - 1].iteration) {
      throw ConfigError("beta_schedule: iterations must be strictly increasing");
    }
  }
  for (const auto& ph : out) {
    if (!(ph.value > 0.0)) throw ConfigError("beta_schedule: values must be positive");
  }
  return out;
}

}  // namespace

const char* to_string(ProblemKind k) { return info(k).name; }

ProblemKind problem_kind_from_string(const std::string& s) {
  for (const auto& i : kinds())
    if (s == i.name) return i.kind;
  throw ConfigError(fmt::format("unknown problem \"{}\"", s));
}

std::vector<std::pair<std::string, std::string>> problem_catalog() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& i : kinds()) out.emplace_back(i.name, i.description);
  return out;
}

Experiment parse_experiment(const json& doc) {
  require_object(doc, "config");
  if (!doc.contains("problem")) throw ConfigError("config: missing \"problem\"");
  Experiment exp;
  exp.source = doc;
  exp.kind = problem_kind_from_string(get_string(doc.at("problem"), "problem"));
  const KindInfo& ki = info(exp.kind);

  std::set<std::string> allowed = kCommonKeys;
  allowed.insert(ki.keys.begin(), ki.keys.end());
  reject_unknown(doc, allowed, std::string("config for ") + ki.name);

  if (doc.contains("name")) exp.name = get_string(doc.at("name"), "name");
  if (!doc.contains("n")) throw ConfigError("config: missing \"n\"");
  exp.n = get_int(doc.at("n"), "n");
  if (exp.kind == ProblemKind::kRayleighStiefel || exp.kind == ProblemKind::kFlagQuadratic) {
    if (!doc.contains("d")) throw ConfigError("config: missing \"d\"");
    exp.d = get_int(doc.at("d"), "d");
  } else if (exp.kind == ProblemKind::kWeightedPcaPsd) {
    if (!doc.contains("p")) throw ConfigError("config: missing \"p\"");
    exp.d = get_int(doc.at("p"), "p");
  }
  if (doc.contains("blocks")) {
    const json& b = doc.at("blocks");
    if (!b.is_array()) throw ConfigError("\"blocks\": expected an array of integers");
    for (const json& s : b) exp.blocks.push_back(get_int(s, "blocks"));
  }
  if (doc.contains("metric")) {
    const json& m = require_object(doc.at("metric"), "metric");
    reject_unknown(m, ki.metric_keys, "metric");
    if (m.contains("alpha0")) exp.alpha0 = get_double(m.at("alpha0"), "alpha0");
    if (m.contains("alpha1")) exp.alpha1 = get_double(m.at("alpha1"), "alpha1");
    if (m.contains("beta")) exp.beta = get_double(m.at("beta"), "beta");
  }
  if (doc.contains("beta_schedule")) {
    if (doc.contains("metric") && doc.at("metric").contains("beta")) {
      throw ConfigError("config: give either metric.beta or beta_schedule, not both");
    }
    exp.beta_schedule = parse_schedule(doc.at("beta_schedule"));
    exp.beta = exp.beta_schedule.front().value;
  }
  if (doc.contains("weights")) {
    const std::string w = get_string(doc.at("weights"), "weights");
    if (w != "random" && w != "uniform") {
      throw ConfigError("\"weights\": expected \"random\" or \"uniform\"");
    }
    exp.uniform_weights = w == "uniform";
  }
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("\"seed\": expected a nonnegative integer");
    }
    exp.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("solver")) {
    const std::string s = get_string(doc.at("solver"), "solver");
    if (s == "trust_region") exp.solver = SolverKind::kTrustRegion;
    else if (s == "steepest_descent") exp.solver = SolverKind::kSteepestDescent;
    else throw ConfigError(fmt::format("\"solver\": unknown solver \"{}\"", s));
  }
  if (doc.contains("solver_config")) parse_solver_config(doc.at("solver_config"), exp.solver_config);
  if (doc.contains("sweep")) {
    const json& sw = require_object(doc.at("sweep"), "sweep");
    reject_unknown(sw, {"parameter", "values"}, "sweep");
    if (!sw.contains("parameter") || !sw.contains("values")) {
      throw ConfigError("sweep: needs \"parameter\" and \"values\"");
    }
    SweepGrid s;
    s.parameter = get_string(sw.at("parameter"), "parameter");
    if (!ki.sweepable.count(s.parameter)) {
      throw ConfigError(fmt::format("sweep: parameter \"{}\" does not apply to {}", s.parameter, ki.name));
    }
    if (s.parameter == "beta" && !exp.beta_schedule.empty()) {
      throw ConfigError("sweep: cannot sweep beta together with a beta_schedule");
    }
    if (!sw.at("values").is_array()) throw ConfigError("sweep: \"values\" must be an array");
    for (const json& v : sw.at("values")) s.values.push_back(get_double(v, "values"));
    exp.sweep = std::move(s);
  }
  validate_experiment(exp);
  return exp;
}

Experiment load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config \"{}\"", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
  return parse_experiment(doc);
}

void validate_experiment(const Experiment& exp) {
  if (exp.n < 1) throw ConfigError("\"n\" must be at least 1");
  switch (exp.kind) {
    case ProblemKind::kRayleighStiefel:
      if (exp.d < 1 || exp.d > exp.n) throw ConfigError("need 1 <= d <= n");
      break;
    case ProblemKind::kFlagQuadratic: {
      if (exp.d < 1 || exp.d > exp.n) throw ConfigError("need 1 <= d <= n");
      int total = 0;
      for (int b : exp.blocks) {
        if (b < 1) throw ConfigError("\"blocks\": sizes must be positive");
        total += b;
      }
      if (total > exp.d) throw ConfigError("\"blocks\": sizes must sum to at most d");
      break;
    }
    case ProblemKind::kWeightedPcaPsd:
      if (exp.d < 1 || exp.d > exp.n) throw ConfigError("need 1 <= p <= n");
      break;
    case ProblemKind::kSpdLogdet:
      break;
  }
  if (!(exp.alpha0 > 0.0) || !(exp.alpha1 > 0.0) || !(exp.beta > 0.0)) {
    throw ConfigError("metric parameters must be positive");
  }
  exp.solver_config.validate();
}

Experiment with_parameter(const Experiment& exp, const std::string& parameter, double value) {
  Experiment out = exp;
  const auto as_int = [&](double v) {
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      throw ConfigError(fmt::format("sweep value {} for \"{}\" is not an integer", v, parameter));
    }
    return static_cast<int>(v);
  };
  if (parameter == "alpha") {
    out.alpha1 = value * exp.alpha0;
  } else if (parameter == "beta") {
    out.beta = value;
  } else if (parameter == "n") {
    out.n = as_int(value);
  } else if (parameter == "d" || parameter == "p") {
    out.d = as_int(value);
  } else if (parameter == "seed") {
    if (value < 0) throw ConfigError("sweep: seed must be nonnegative");
    out.seed = static_cast<std::uint64_t>(as_int(value));
  } else {
    throw ConfigError(fmt::format("sweep: unknown parameter \"{}\"", parameter));
  }
  out.sweep.reset();
  return out;
}

}  // namespace riemhess::experiment
