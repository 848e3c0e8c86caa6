#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "riemhess/experiment/runner.hpp"

namespace ex = riemhess::experiment;

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool validate = false;
  bool no_timing = false;
  int trials = 10;
  std::string manifold;
};

ex::Experiment load(const Options& o) {
  ex::Experiment exp = ex::load_experiment(o.config);
  if (o.seed_given) {
    exp.seed = o.seed;
    exp.source["seed"] = o.seed;
  }
  if (o.no_timing) {
    exp.solver_config.record_timing = false;
    exp.source["solver_config"]["record_timing"] = false;
  }
  return exp;
}

void print_reports(const std::vector<riemhess::diagnostics::CheckReport>& reports) {
  size_t width = 8;
  for (const auto& r : reports) width = std::max(width, r.manifold.size());
  fmt::print("{:<26} {:<{}} {:>7} {:>12} {:>10}  {}\n", "check", "manifold", width, "trials",
             "max_error", "tolerance", "result");
  for (const auto& r : reports) {
    fmt::print("{:<26} {:<{}} {:>7} {:>12.3e} {:>10.1e}  {}{}\n", r.check, r.manifold, width, r.trials,
               r.max_error, r.tolerance, r.passed ? "pass" : "FAIL",
               r.passed ? "" : fmt::format(" (worst seed {})", r.worst_seed));
    if (!r.note.empty()) fmt::print("    note: {}\n", r.note);
  }
}

bool all_passed(const std::vector<riemhess::diagnostics::CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return true;
}

int cmd_validate(const Options& o) {
  const ex::Experiment exp = load(o);
  const auto reports = ex::validate_problem(exp, o.trials);
  print_reports(reports);
  return all_passed(reports) ? 0 : 1;
}

int cmd_run(const Options& o) {
  if (o.validate) return cmd_validate(o);
  const ex::Experiment exp = load(o);
  const ex::RunLog log = ex::run(exp);
  ex::write_run(o.out, log);
  fmt::print("{}: {} after {} iterations, cost {}, gradient norm {:.3e}\n",
             ex::to_string(exp.kind), log.stop_reason, log.records.back().iter, log.final_cost,
             log.final_gradnorm);
  const int code = ex::exit_code(log);
  if (code != 0) std::cerr << "riemhess: run did not converge (" << log.stop_reason << ")\n";
  return code;
}

int cmd_sweep(const Options& o) {
  const ex::Experiment exp = load(o);
  if (!exp.sweep) throw riemhess::ConfigError("sweep: config has no \"sweep\" section");
  const auto points = ex::sweep(exp);
  ex::write_sweep(o.out, points);
  std::cout << ex::sweep_summary_csv(points);
  int code = 0;
  for (const auto& p : points) {
    if (!p.ok) std::cerr << fmt::format("riemhess: sweep point {} failed: {}\n", p.value, p.error);
    if (!p.ok || ex::exit_code(p.log) != 0) code = 2;
  }
  return code;
}

int cmd_list() {
  for (const auto& [name, description] : ex::problem_catalog()) fmt::print("{:<18} {}\n", name, description);
  return 0;
}

int cmd_check(const Options& o) {
  const auto reports = ex::check_manifold(o.manifold, o.trials, o.seed);
  print_reports(reports);
  return all_passed(reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian optimization experiments: run, sweep, validate, check"};
  app.require_subcommand(1);
  Options o;

  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment JSON file")->required()->check(CLI::ExistingFile);
  };
  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "overrides the config seed")->each([&](const std::string&) {
      o.seed_given = true;
    });
  };

  CLI::App* run = app.add_subcommand("run", "solve one configured problem");
  add_config(run);
  add_seed(run);
  run->add_option("--out", o.out, "output directory for run.json and trace.csv");
  run->add_flag("--validate", o.validate, "only run the finite-difference checks and exit");
  run->add_flag("--no-timing", o.no_timing, "record zero wall-clock times for reproducible logs");
  run->add_option("--trials", o.trials, "trials per check with --validate")->check(CLI::PositiveNumber);

  CLI::App* sweep = app.add_subcommand("sweep", "run the parameter grid in the config's sweep section");
  add_config(sweep);
  add_seed(sweep);
  sweep->add_option("--out", o.out, "output directory");
  sweep->add_flag("--no-timing", o.no_timing, "record zero wall-clock times");

  CLI::App* validate = app.add_subcommand("validate", "finite-difference checks of the configured problem");
  add_config(validate);
  add_seed(validate);
  validate->add_option("--trials", o.trials, "trials per check")->check(CLI::PositiveNumber);

  CLI::App* list = app.add_subcommand("list-problems", "list the available problem kinds");

  CLI::App* check = app.add_subcommand("check", "identity checks on a manifold");
  check->add_option("--manifold", o.manifold, "sphere, stiefel, flag, spd or psd")
      ->required()
      ->check(CLI::IsMember(ex::checkable_manifolds()));
  check->add_option("--trials", o.trials, "trials per check")->check(CLI::PositiveNumber);
  check->add_option("--seed", o.seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (validate->parsed()) return cmd_validate(o);
    if (list->parsed()) return cmd_list();
    if (check->parsed()) return cmd_check(o);
  } catch (const std::exception& e) {
    std::cerr << "riemhess: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
