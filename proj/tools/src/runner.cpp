#include "riemhess/experiment/runner.hpp"

#include <filesystem>

#include <fmt/format.h>

#include "riemhess/errors.hpp"
#include "riemhess/flag.hpp"
#include "riemhess/problems.hpp"
#include "riemhess/psd_fixed_rank.hpp"
#include "riemhess/spd.hpp"
#include "riemhess/stiefel.hpp"

namespace riemhess::experiment {

namespace {

using nlohmann::json;

template <RiemannianManifold M>
SolveResult<typename M::Point> solve(const Experiment& exp, const M& m,
                                     const AmbientProblem<typename M::Vector>& f,
                                     typename M::Point x0, const SolverConfig& cfg) {
  if (exp.solver == SolverKind::kSteepestDescent) return steepest_descent(m, f, std::move(x0), cfg);
  return trust_region(m, f, std::move(x0), cfg);
}

template <class Point>
RunLog to_log(const Experiment& exp, const SolveResult<Point>& res) {
  RunLog log;
  log.config = exp.source;
  log.records = res.records;
  log.stop_reason = to_string(res.reason);
  log.final_cost = res.final_cost;
  log.final_gradnorm = res.final_gradnorm;
  log.total_ms = res.total_ms;
  return log;
}

Matrix solution_matrix(const StiefelPoint& x) { return x.y(); }
Matrix solution_matrix(const SpdPoint& x) { return x.p(); }

std::pair<RunLog, Matrix> run_weighted_pca(const Experiment& exp, const AmbientProblem<PsdVector>& f,
                                           PsdPoint x) {
  const PsdMetric base{exp.alpha0, exp.alpha1, exp.beta};
  if (exp.beta_schedule.empty()) {
    const PsdFixedRank m(exp.n, exp.d, base);
    auto res = solve(exp, m, f, std::move(x), exp.solver_config);
    return {to_log(exp, res), res.point.matrix()};
  }
  const int cap = exp.solver_config.max_outer_iterations;
  RunLog log;
  log.config = exp.source;
  log.stop_reason = to_string(StopReason::kMaxIterations);
  int offset = 0;
  for (size_t i = 0; i < exp.beta_schedule.size() && offset < cap; ++i) {
    const int end = i + 1 < exp.beta_schedule.size()
                        ? std::min(exp.beta_schedule[i + 1].iteration, cap)
                        : cap;
    if (end <= offset) continue;
    SolverConfig cfg = exp.solver_config;
    cfg.max_outer_iterations = end - offset;
    const PsdFixedRank m(exp.n, exp.d, {base.alpha0, base.alpha1, exp.beta_schedule[i].value});
    auto res = solve(exp, m, f, std::move(x), cfg);
    for (size_t k = (i == 0 ? 0 : 1); k < res.records.size(); ++k) {
      IterationRecord r = res.records[k];
      r.iter += offset;
      r.ms += log.total_ms;
      log.records.push_back(r);
    }
    offset += res.records.back().iter;
    log.total_ms += res.total_ms;
    log.final_cost = res.final_cost;
    log.final_gradnorm = res.final_gradnorm;
    log.stop_reason = to_string(res.reason);
    x = std::move(res.point);
    if (res.reason != StopReason::kMaxIterations) break;
  }
  return {std::move(log), x.matrix()};
}

// Draws problem data and the starting point from one generator, in a fixed
// order: A, then W (weighted PCA only), then x0. `visit` receives the
// manifold, the cost, the starting point and A.
template <class Visitor>
auto with_problem(const Experiment& exp, PsdMetric psd_metric, Visitor&& visit) {
  Rng rng(exp.seed);
  const StiefelMetric frame_metric{exp.alpha0, exp.alpha1};
  switch (exp.kind) {
    case ProblemKind::kRayleighStiefel: {
      const Stiefel m(exp.n, exp.d, frame_metric);
      const Matrix a = problems::random_spd_matrix(exp.n, rng);
      const auto f = problems::rayleigh(a);
      return visit(m, f, m.random_point(rng), a);
    }
    case ProblemKind::kFlagQuadratic: {
      const Flag m(exp.n, exp.d, exp.blocks, frame_metric);
      const Matrix a = problems::random_spd_matrix(exp.n, rng);
      const auto f = problems::flag_quadratic(a, problems::flag_lambda(m.partition()));
      return visit(m, f, m.random_point(rng), a);
    }
    case ProblemKind::kWeightedPcaPsd: {
      const PsdFixedRank m(exp.n, exp.d, psd_metric);
      const Matrix a = problems::random_spd_matrix(exp.n, rng);
      const Eigen::VectorXd w = exp.uniform_weights ? Eigen::VectorXd::Ones(exp.n)
                                                     : problems::random_weights(exp.n, rng);
      const auto f = problems::weighted_pca(a, w);
      return visit(m, f, m.random_point(rng), a);
    }
    case ProblemKind::kSpdLogdet: {
      const Spd m(exp.n);
      const Matrix a = problems::random_spd_matrix(exp.n, rng);
      const auto f = problems::spd_logdet(a);
      return visit(m, f, m.random_point(rng), a);
    }
  }
  throw ConfigError("unknown problem kind");
}

PsdMetric initial_psd_metric(const Experiment& exp) {
  return {exp.alpha0, exp.alpha1,
          exp.beta_schedule.empty() ? exp.beta : exp.beta_schedule.front().value};
}

std::string point_dir(const std::string& dir, size_t k) {
  return (std::filesystem::path(dir) / fmt::format("point_{:03d}", k)).string();
}

}  // namespace

RunLog run(const Experiment& exp) { return run_detailed(exp).log; }

RunResult run_detailed(const Experiment& exp) {
  validate_experiment(exp);
  return with_problem(exp, initial_psd_metric(exp),
                      [&](const auto& m, const auto& f, auto x0, const Matrix& a) {
                        using M = std::decay_t<decltype(m)>;
                        if constexpr (std::is_same_v<M, PsdFixedRank>) {
                          auto [log, s] = run_weighted_pca(exp, f, std::move(x0));
                          return RunResult{std::move(log), a, std::move(s)};
                        } else {
                          auto res = solve(exp, m, f, std::move(x0), exp.solver_config);
                          return RunResult{to_log(exp, res), a, solution_matrix(res.point)};
                        }
                      });
}

std::vector<diagnostics::CheckReport> validate_problem(const Experiment& exp, int trials) {
  validate_experiment(exp);
  return with_problem(exp, initial_psd_metric(exp), [&](const auto& m, const auto& f, auto, const Matrix&) {
    return std::vector<diagnostics::CheckReport>{
        diagnostics::check_gradient_fd(m, f, trials, exp.seed),
        diagnostics::check_hessian_fd(m, f, trials, exp.seed),
        diagnostics::check_hessian_duality(m, f, trials, exp.seed)};
  });
}

std::vector<SweepPoint> sweep(const Experiment& exp) {
  if (!exp.sweep) throw ConfigError("sweep: config has no \"sweep\" section");
  std::vector<SweepPoint> out;
  for (double value : exp.sweep->values) {
    SweepPoint pt;
    pt.value = value;
    try {
      Experiment local = with_parameter(exp, exp.sweep->parameter, value);
      local.source["sweep_point"] = {{"parameter", exp.sweep->parameter}, {"value", value}};
      pt.log = run(local);
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

std::string sweep_summary_csv(const std::vector<SweepPoint>& points) {
  std::string out = "param,total_iterations,final_gradnorm,final_cost,status,error\n";
  for (const SweepPoint& p : points) {
    if (p.ok) {
      out += fmt::format("{},{},{},{},{},\n", p.value, p.log.records.back().iter,
                         p.log.final_gradnorm, p.log.final_cost, p.log.stop_reason);
    } else {
      std::string msg = p.error;
      for (char& c : msg)
        if (c == ',' || c == '\n' || c == '"') c = ' ';
      out += fmt::format("{},,,,error,{}\n", p.value, msg);
    }
  }
  return out;
}

void write_sweep(const std::string& dir, const std::vector<SweepPoint>& points) {
  std::filesystem::create_directories(dir);
  for (size_t k = 0; k < points.size(); ++k) {
    const SweepPoint& p = points[k];
    if (p.ok) {
      write_run(point_dir(dir, k), p.log);
    } else {
      std::filesystem::create_directories(point_dir(dir, k));
      const json err = {{"value", p.value}, {"error", p.error}};
      write_file_atomic((std::filesystem::path(point_dir(dir, k)) / "error.json").string(),
                        err.dump(2) + "\n");
    }
  }
  write_file_atomic((std::filesystem::path(dir) / "summary.csv").string(), sweep_summary_csv(points));
}

int exit_code(const RunLog& log) { return log.stop_reason == to_string(StopReason::kConverged) ? 0 : 2; }

std::vector<std::string> checkable_manifolds() { return {"sphere", "stiefel", "flag", "spd", "psd"}; }

std::vector<diagnostics::CheckReport> check_manifold(const std::string& name, int trials,
                                                     std::uint64_t seed) {
  const auto suite = [&](const auto& m) {
    return std::vector<diagnostics::CheckReport>{
        diagnostics::check_projection(m, trials, seed),
        diagnostics::check_projection_self_adjoint(m, trials, seed),
        diagnostics::check_torsion(m, trials, seed),
        diagnostics::check_metric_compatibility(m, trials, seed),
        diagnostics::check_metric_derivatives(m, trials, seed)};
  };
  if (name == "sphere") return suite(Sphere(5));
  if (name == "stiefel") return suite(Stiefel(8, 3, {1.0, 0.5}));
  if (name == "flag") return suite(Flag(14, 12, {6, 4, 2}, {1.0, 0.5}));
  if (name == "spd") return suite(Spd(6));
  if (name == "psd") return suite(PsdFixedRank(20, 5, {1.0, 0.5, 2.0}));
  throw ConfigError(fmt::format("unknown manifold \"{}\"", name));
}

}  // namespace riemhess::experiment
