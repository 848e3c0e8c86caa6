#include <benchmark/benchmark.h>

#include "riemhess/flag.hpp"
#include "riemhess/problems.hpp"
#include "riemhess/psd_fixed_rank.hpp"
#include "riemhess/solvers.hpp"

using namespace riemhess;

static void BM_TrustRegionFlag(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(7);
  const Flag m(n, 12, {6, 4, 2}, {1.0, 0.5});
  const auto f = problems::flag_quadratic(problems::random_spd_matrix(n, rng), problems::flag_lambda(m.partition()));
  const auto x0 = m.random_point(rng);
  SolverConfig cfg;
  cfg.record_timing = false;
  int iterations = 0;
  for (auto _ : state) {
    const auto res = trust_region(m, f, x0, cfg);
    iterations = res.records.back().iter;
    benchmark::DoNotOptimize(res.final_cost);
  }
  state.counters["outer_iterations"] = iterations;
}
BENCHMARK(BM_TrustRegionFlag)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_TrustRegionWeightedPca(benchmark::State& state) {
  Rng rng(8);
  const int n = 120, p = 10;
  const PsdFixedRank m(n, p, {1.0, 1.0, static_cast<double>(state.range(0))});
  const auto f = problems::weighted_pca(problems::random_spd_matrix(n, rng), problems::random_weights(n, rng));
  const auto x0 = m.random_point(rng);
  SolverConfig cfg;
  cfg.record_timing = false;
  cfg.gradient_norm_tolerance = 1e-7;
  int iterations = 0;
  for (auto _ : state) {
    const auto res = trust_region(m, f, x0, cfg);
    iterations = res.records.back().iter;
    benchmark::DoNotOptimize(res.final_cost);
  }
  state.counters["outer_iterations"] = iterations;
}
BENCHMARK(BM_TrustRegionWeightedPca)->Arg(1)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_TruncatedCg(benchmark::State& state) {
  Rng rng(9);
  const Flag m(100, 12, {6, 4, 2}, {1.0, 0.5});
  const auto f = problems::flag_quadratic(problems::random_spd_matrix(100, rng), problems::flag_lambda(m.partition()));
  const auto x = m.random_point(rng);
  const Matrix eg = f.egrad(x.y());
  const Matrix grad = m.rgrad(x, eg);
  const std::function<Matrix(const Matrix&)> hess = [&](const Matrix& v) {
    return m.rhess11(x, eg, f.ehess(x.y(), v), v);
  };
  const SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(truncated_cg_subproblem(m, x, grad, hess, 1.0, cfg));
}
BENCHMARK(BM_TruncatedCg)->Unit(benchmark::kMicrosecond);
