#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "riemhess/solvers.hpp"

namespace riemhess::experiment {

enum class ProblemKind { kRayleighStiefel, kFlagQuadratic, kWeightedPcaPsd, kSpdLogdet };

const char* to_string(ProblemKind k);
ProblemKind problem_kind_from_string(const std::string& s);
/// One line per problem kind, for `list-problems`.
std::vector<std::pair<std::string, std::string>> problem_catalog();

enum class SolverKind { kTrustRegion, kSteepestDescent };

/// Metric value in force from `iteration` on.
struct BetaPhase {
  int iteration = 0;
  double value = 0.0;
};

struct SweepGrid {
  /// alpha (alpha1 / alpha0), beta, n, d, p or seed.
  std::string parameter;
  std::vector<double> values;
};

/// A validated experiment description. Built only through parse_experiment, which
/// rejects unknown keys, inconsistent dimensions and nonpositive parameters.
struct Experiment {
  std::string name;
  ProblemKind kind = ProblemKind::kRayleighStiefel;
  int n = 0;
  int d = 0;  // frame width (Stiefel, flag) or rank p (PSD)
  std::vector<int> blocks;
  double alpha0 = 1.0;
  double alpha1 = 1.0;
  double beta = 1.0;
  std::vector<BetaPhase> beta_schedule;
  bool uniform_weights = false;
  std::uint64_t seed = 0;
  SolverKind solver = SolverKind::kTrustRegion;
  SolverConfig solver_config;
  std::optional<SweepGrid> sweep;
  /// The document the experiment was parsed from, echoed into the run log.
  nlohmann::json source;
};

/// Parses and validates a config document. Throws ConfigError with the
/// offending key on any problem.
Experiment parse_experiment(const nlohmann::json& doc);
/// Reads a file and parses it; unreadable or malformed JSON is a ConfigError.
Experiment load_experiment(const std::string& path);

/// Checks dimension and parameter consistency; throws ConfigError.
void validate_experiment(const Experiment& exp);

/// Copy of `exp` with one sweep parameter replaced. Not validated.
Experiment with_parameter(const Experiment& exp, const std::string& parameter, double value);

}  // namespace riemhess::experiment
