#pragma once

#include <string>
#include <vector>

#include "riemhess/diagnostics.hpp"
#include "riemhess/experiment/run_log.hpp"
#include "riemhess/experiment/experiment.hpp"

namespace riemhess::experiment {

/// Solves the configured problem. With a beta schedule the run is split
/// into phases at the scheduled iterations; each phase restarts the solver
/// from the previous iterate on the manifold with the new beta, and the
/// records are concatenated with continuous iteration numbers.
RunLog run(const Experiment& exp);

struct RunResult {
  RunLog log;
  Matrix data;      // the generated A
  Matrix solution;  // Y for frames, X for SPD, Y P Y^T for fixed-rank PSD
};

/// run() that also returns the generated data and the final point.
RunResult run_detailed(const Experiment& exp);

/// Gradient and Hessian finite-difference checks plus Hessian duality on
/// the configured problem, at random points drawn from the experiment seed.
std::vector<diagnostics::CheckReport> validate_problem(const Experiment& exp, int trials = 10);

struct SweepPoint {
  double value = 0.0;
  bool ok = false;
  std::string error;
  RunLog log;
};

/// One run per grid value. A failing point is recorded with its message and
/// the sweep continues.
std::vector<SweepPoint> sweep(const Experiment& exp);

/// Columns param,total_iterations,final_gradnorm,final_cost,status,error.
std::string sweep_summary_csv(const std::vector<SweepPoint>& points);

/// Writes point_<k>/run.json and trace.csv (or point_<k>/error.json) and
/// summary.csv under `dir`.
void write_sweep(const std::string& dir, const std::vector<SweepPoint>& points);

/// Process exit code for a finished run: 0 converged, 2 otherwise.
int exit_code(const RunLog& log);

/// Identity suite (projection, self-adjointness, torsion, metric
/// compatibility, metric derivatives) on a named manifold at a default size.
std::vector<diagnostics::CheckReport> check_manifold(const std::string& name, int trials,
                                                     std::uint64_t seed);
std::vector<std::string> checkable_manifolds();

}  // namespace riemhess::experiment
