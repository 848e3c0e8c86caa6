#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "riemhess/errors.hpp"
#include "riemhess/experiment/run_log.hpp"
#include "riemhess/experiment/runner.hpp"
#include "riemhess/experiment/experiment.hpp"

using namespace riemhess;
using namespace riemhess::experiment;
using nlohmann::json;

namespace {

json rayleigh_doc() {
  return json::parse(R"({
    "problem": "rayleigh_stiefel", "n": 10, "d": 3,
    "metric": {"alpha0": 1.0, "alpha1": 0.5}, "seed": 4,
    "solver_config": {"record_timing": false}
  })");
}

json pca_doc() {
  return json::parse(R"({
    "problem": "weighted_pca_psd", "n": 16, "p": 3,
    "beta_schedule": [{"iteration": 0, "value": 0.1}, {"iteration": 3, "value": 10.0},
                      {"iteration": 6, "value": 30.0}],
    "seed": 2, "solver_config": {"record_timing": false, "gradient_norm_tolerance": 1e-9}
  })");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("riemhess_experiment_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

void expect_config_error(const json& doc) {
  EXPECT_THROW(parse_experiment(doc), ConfigError) << doc.dump();
}

}  // namespace

TEST(ExperimentParse, ValidDocuments) {
  const Experiment r = parse_experiment(rayleigh_doc());
  EXPECT_EQ(r.kind, ProblemKind::kRayleighStiefel);
  EXPECT_EQ(r.n, 10);
  EXPECT_EQ(r.d, 3);
  EXPECT_DOUBLE_EQ(r.alpha1, 0.5);
  EXPECT_EQ(r.seed, 4u);
  EXPECT_FALSE(r.solver_config.record_timing);

  const Experiment p = parse_experiment(pca_doc());
  ASSERT_EQ(p.beta_schedule.size(), 3u);
  EXPECT_EQ(p.beta_schedule[1].iteration, 3);
  EXPECT_DOUBLE_EQ(p.beta_schedule[2].value, 30.0);
  EXPECT_FALSE(p.uniform_weights);
}

TEST(ExperimentParse, UnknownKeysRejected) {
  json d = rayleigh_doc();
  d["alpah1"] = 0.5;
  expect_config_error(d);

  d = rayleigh_doc();
  d["metric"]["beta"] = 1.0;  // beta is not a Stiefel parameter
  expect_config_error(d);

  d = rayleigh_doc();
  d["blocks"] = {1};  // blocks belong to flag problems
  expect_config_error(d);

  d = rayleigh_doc();
  d["solver_config"]["max_iterations"] = 5;
  expect_config_error(d);

  d = pca_doc();
  d["beta_schedule"][0]["iter"] = 0;
  expect_config_error(d);

  d = rayleigh_doc();
  d["sweep"] = {{"parameter", "alpha"}, {"values", {1.0}}, {"parallel", true}};
  expect_config_error(d);
}

TEST(ExperimentParse, InvalidValuesRejected) {
  json d = rayleigh_doc();
  d.erase("problem");
  expect_config_error(d);

  d = rayleigh_doc();
  d["problem"] = "rayleigh";
  expect_config_error(d);

  d = rayleigh_doc();
  d["d"] = 11;
  expect_config_error(d);

  d = rayleigh_doc();
  d["n"] = "10";
  expect_config_error(d);

  d = rayleigh_doc();
  d["metric"]["alpha0"] = -1.0;
  expect_config_error(d);

  d = rayleigh_doc();
  d["solver"] = "newton";
  expect_config_error(d);

  d = rayleigh_doc();
  d["solver_config"]["rho_accept"] = 0.0;
  expect_config_error(d);

  d = rayleigh_doc();
  d["seed"] = -3;
  expect_config_error(d);

  d = json::parse(R"({"problem": "flag_quadratic", "n": 10, "d": 4, "blocks": [3, 2]})");
  expect_config_error(d);  // blocks sum past d
  d["blocks"] = {3, 0};
  expect_config_error(d);
  d["blocks"] = {3, 1};
  EXPECT_NO_THROW(parse_experiment(d));

  d = pca_doc();
  d["metric"] = {{"beta", 1.0}};  // fixed beta together with a schedule
  expect_config_error(d);

  d = pca_doc();
  d["beta_schedule"][0]["iteration"] = 1;
  expect_config_error(d);

  d = pca_doc();
  d["beta_schedule"][2]["iteration"] = 3;
  expect_config_error(d);

  d = pca_doc();
  d["beta_schedule"][1]["value"] = 0.0;
  expect_config_error(d);

  d = pca_doc();
  d["weights"] = "ones";
  expect_config_error(d);

  d = pca_doc();
  d["sweep"] = {{"parameter", "beta"}, {"values", {1.0}}};
  expect_config_error(d);

  d = json::parse(R"({"problem": "spd_logdet", "n": 4, "sweep": {"parameter": "alpha", "values": [1]}})");
  expect_config_error(d);
}

TEST(ExperimentParse, MalformedFileIsConfigError) {
  TempDir tmp;
  std::filesystem::create_directories(tmp.path);
  const auto path = tmp.path / "bad.json";
  std::ofstream(path) << "{\"problem\": \"spd_logdet\", ";
  EXPECT_THROW(load_experiment(path.string()), ConfigError);
  EXPECT_THROW(load_experiment((tmp.path / "missing.json").string()), ConfigError);
}

TEST(ExperimentParse, WithParameter) {
  const Experiment s = parse_experiment(rayleigh_doc());
  EXPECT_DOUBLE_EQ(with_parameter(s, "alpha", 2.0).alpha1, 2.0 * s.alpha0);
  EXPECT_EQ(with_parameter(s, "d", 5.0).d, 5);
  EXPECT_THROW(with_parameter(s, "d", 2.5), ConfigError);
  EXPECT_THROW(with_parameter(s, "gamma", 1.0), ConfigError);
}

TEST(RunLogFormat, CsvHeaderIsExact) {
  EXPECT_EQ(to_csv({}), "iter,cost,gradnorm,radius_or_step,inner_iters,rho,ms\n");
}

TEST(RunLogFormat, JsonAndCsvRoundTrip) {
  RunLog log;
  log.config = rayleigh_doc();
  log.stop_reason = "converged";
  log.records = {{0, 1.0 / 3.0, 0.1, 0.5, 0, std::numeric_limits<double>::quiet_NaN(), 0.0},
                 {1, -2.5e-300, 1e-17, 0.25, 7, 0.987654321, 1.5},
                 {2, 0.1 + 0.2, std::numeric_limits<double>::infinity(), 1.0, 3,
                  -std::numeric_limits<double>::infinity(), 2.0}};
  log.final_cost = 0.1 + 0.2;
  log.final_gradnorm = 1e-17;
  log.total_ms = 2.0;

  const RunLog back = run_log_from_json(json::parse(to_json(log).dump()));
  EXPECT_TRUE(back == log);

  const auto rows = records_from_csv(to_csv(log.records));
  ASSERT_EQ(rows.size(), log.records.size());
  for (size_t i = 0; i < rows.size(); ++i) EXPECT_TRUE(same_record(rows[i], log.records[i])) << i;

  EXPECT_THROW(records_from_csv("iter,cost\n1,2\n"), ConfigError);
}

TEST(RunLogFormat, WriteRunProducesBothFiles) {
  TempDir tmp;
  const RunLog log = run(parse_experiment(rayleigh_doc()));
  write_run(tmp.path.string(), log);
  const std::string csv = slurp(tmp.path / "trace.csv");
  EXPECT_EQ(csv, to_csv(log.records));
  EXPECT_TRUE(run_log_from_json(json::parse(slurp(tmp.path / "run.json"))) == log);
  for (const auto& entry : std::filesystem::directory_iterator(tmp.path)) {
    EXPECT_TRUE(entry.path().filename() == "run.json" || entry.path().filename() == "trace.csv")
        << entry.path();
  }
}

TEST(Runner, DeterministicWithoutTiming) {
  TempDir tmp;
  const Experiment s = parse_experiment(rayleigh_doc());
  write_run((tmp.path / "a").string(), run(s));
  write_run((tmp.path / "b").string(), run(s));
  EXPECT_EQ(slurp(tmp.path / "a" / "trace.csv"), slurp(tmp.path / "b" / "trace.csv"));
  EXPECT_EQ(slurp(tmp.path / "a" / "run.json"), slurp(tmp.path / "b" / "run.json"));
}

TEST(Runner, EveryProblemKindConverges) {
  const json docs[] = {
      rayleigh_doc(),
      json::parse(R"({"problem": "flag_quadratic", "n": 12, "d": 5, "blocks": [2, 2], "seed": 3})"),
      pca_doc(),
      json::parse(R"({"problem": "spd_logdet", "n": 5, "seed": 1})"),
  };
  for (const json& d : docs) {
    const RunLog log = run(parse_experiment(d));
    EXPECT_EQ(log.stop_reason, "converged") << d.dump();
    EXPECT_EQ(exit_code(log), 0);
    EXPECT_EQ(log.config, d);
    EXPECT_EQ(log.records.front().iter, 0);
  }
}

TEST(Runner, IterationCapGivesExitCodeTwo) {
  json d = rayleigh_doc();
  d["solver_config"]["max_outer_iterations"] = 1;
  const RunLog log = run(parse_experiment(d));
  EXPECT_EQ(log.stop_reason, "max_iterations");
  EXPECT_EQ(exit_code(log), 2);
}

TEST(Runner, BetaSchedulePhasesAreContiguous) {
  json d = pca_doc();
  d["solver_config"]["max_outer_iterations"] = 8;
  d["solver_config"]["gradient_norm_tolerance"] = 1e-30;  // force every phase to run to its cap
  const RunLog log = run(parse_experiment(d));
  ASSERT_EQ(log.records.size(), 9u);
  for (size_t i = 0; i < log.records.size(); ++i) EXPECT_EQ(log.records[i].iter, static_cast<int>(i));
  EXPECT_EQ(log.stop_reason, "max_iterations");
  // The final cost is the last record's cost, and costs never increase
  // inside a phase. Across a phase boundary the cost is unchanged since the
  // metric does not enter it.
  EXPECT_EQ(log.final_cost, log.records.back().cost);
  for (size_t i = 1; i < log.records.size(); ++i) {
    EXPECT_LE(log.records[i].cost, log.records[i - 1].cost * (1 + 1e-12) + 1e-12) << i;
  }
}

TEST(Runner, ScheduleMatchesManualPhases) {
  // A single-entry schedule is the same run as the fixed beta.
  json sched = pca_doc();
  sched["beta_schedule"] = json::array({{{"iteration", 0}, {"value", 2.0}}});
  json fixed = pca_doc();
  fixed.erase("beta_schedule");
  fixed["metric"] = {{"beta", 2.0}};
  const RunLog a = run(parse_experiment(sched));
  const RunLog b = run(parse_experiment(fixed));
  ASSERT_EQ(a.records.size(), b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) EXPECT_TRUE(same_record(a.records[i], b.records[i]));
}

TEST(Runner, SeedChangesData) {
  json d = rayleigh_doc();
  const RunResult a = run_detailed(parse_experiment(d));
  d["seed"] = 5;
  const RunResult b = run_detailed(parse_experiment(d));
  EXPECT_GT((a.data - b.data).norm(), 1e-3);
  EXPECT_EQ(a.data.rows(), 10);
  EXPECT_EQ(a.solution.cols(), 3);
}

TEST(Runner, ValidateProblemPasses) {
  for (const json& d : {rayleigh_doc(), pca_doc()}) {
    for (const auto& r : validate_problem(parse_experiment(d), 4)) EXPECT_TRUE(r.passed) << r.check;
  }
}

TEST(Sweep, EmptyGrid) {
  json d = rayleigh_doc();
  d["sweep"] = {{"parameter", "alpha"}, {"values", json::array()}};
  const auto points = sweep(parse_experiment(d));
  EXPECT_TRUE(points.empty());
  EXPECT_EQ(sweep_summary_csv(points), "param,total_iterations,final_gradnorm,final_cost,status,error\n");
}

TEST(Sweep, FailingPointIsRecordedAndSweepContinues) {
  TempDir tmp;
  json d = rayleigh_doc();
  d["sweep"] = {{"parameter", "d"}, {"values", {2, 3, 50, 4}}};  // d = 50 exceeds n
  const auto points = sweep(parse_experiment(d));
  ASSERT_EQ(points.size(), 4u);
  EXPECT_TRUE(points[0].ok && points[1].ok && points[3].ok);
  EXPECT_FALSE(points[2].ok);
  EXPECT_FALSE(points[2].error.empty());
  EXPECT_EQ(points[1].log.config["sweep_point"]["value"], 3.0);

  write_sweep(tmp.path.string(), points);
  int logs = 0, errors = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(tmp.path)) {
    logs += entry.path().filename() == "run.json";
    errors += entry.path().filename() == "error.json";
  }
  EXPECT_EQ(logs, 3);
  EXPECT_EQ(errors, 1);
  EXPECT_TRUE(std::filesystem::exists(tmp.path / "point_002" / "error.json"));

  const std::string summary = slurp(tmp.path / "summary.csv");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 5);
  EXPECT_NE(summary.find("50,,,,error,"), std::string::npos);
}

TEST(Sweep, AlphaGridGivesSameMinimum) {
  json d = rayleigh_doc();
  d["sweep"] = {{"parameter", "alpha"}, {"values", {0.25, 1.0, 2.0}}};
  const auto points = sweep(parse_experiment(d));
  for (const auto& p : points) {
    ASSERT_TRUE(p.ok);
    EXPECT_NEAR(p.log.final_cost, points[0].log.final_cost, 1e-9);
  }
}

TEST(CheckManifold, AllNamedManifoldsPass) {
  for (const std::string& name : checkable_manifolds()) {
    for (const auto& r : check_manifold(name, 5, 1)) EXPECT_TRUE(r.passed) << name << " " << r.check;
  }
  EXPECT_THROW(check_manifold("torus", 1, 1), ConfigError);
}
