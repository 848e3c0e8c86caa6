#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "riemhess/errors.hpp"
#include "riemhess/manifold.hpp"

namespace riemhess {

struct SolverConfig {
  int max_outer_iterations = 500;
  double gradient_norm_tolerance = 1e-8;
  double initial_radius = 0.0;  // 0: typical_distance / 8
  double max_radius = 0.0;      // 0: typical_distance
  double rho_accept = 0.1;
  double rho_expand = 0.75;
  double shrink_below = 0.25;  // rho below this shrinks the radius
  double shrink_factor = 0.25;
  int inner_max_iterations = 1000;
  double kappa = 0.1;
  double theta = 1.0;
  // Steepest descent.
  double initial_step = 1.0;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 60;
  /// Next trial step is the accepted one times this. A factor equal to
  /// 1 / backtrack_factor can lock the step onto the stability limit 2 / L.
  double step_growth = 1.5;
  /// Record wall-clock milliseconds; off gives bit-reproducible logs.
  bool record_timing = true;
  /// Point invariant tolerance checked after every accepted step.
  double point_tolerance = 1e-8;

  /// Throws ConfigError on nonpositive values or rho_accept >= rho_expand.
  void validate() const;
};

inline void SolverConfig::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("solver config: ") + name + " must be positive");
  };
  if (max_outer_iterations < 1) throw ConfigError("solver config: max_outer_iterations must be >= 1");
  if (inner_max_iterations < 1) throw ConfigError("solver config: inner_max_iterations must be >= 1");
  if (max_backtracks < 1) throw ConfigError("solver config: max_backtracks must be >= 1");
  positive(gradient_norm_tolerance, "gradient_norm_tolerance");
  if (initial_radius < 0.0 || max_radius < 0.0) {
    throw ConfigError("solver config: radii must be positive (0 selects the default)");
  }
  positive(rho_accept, "rho_accept");
  positive(rho_expand, "rho_expand");
  if (!(rho_accept < rho_expand && rho_expand < 1.0)) {
    throw ConfigError("solver config: need rho_accept < rho_expand < 1");
  }
  positive(shrink_below, "shrink_below");
  if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) {
    throw ConfigError("solver config: shrink_factor must lie in (0, 1)");
  }
  positive(kappa, "kappa");
  positive(theta, "theta");
  positive(initial_step, "initial_step");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ConfigError("solver config: armijo_c must lie in (0, 1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw ConfigError("solver config: backtrack_factor must lie in (0, 1)");
  }
  if (!(step_growth >= 1.0)) throw ConfigError("solver config: step_growth must be >= 1");
  positive(point_tolerance, "point_tolerance");
}

struct IterationRecord {
  int iter = 0;
  double cost = 0.0;
  double gradnorm = 0.0;
  double radius_or_step = 0.0;
  int inner_iters = 0;
  double rho = 0.0;
  double ms = 0.0;
};

enum class StopReason { kConverged, kMaxIterations, kStagnated };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::kConverged: return "converged";
    case StopReason::kMaxIterations: return "max_iterations";
    case StopReason::kStagnated: return "stagnated";
  }
  return "unknown";
}

template <class Point>
struct SolveResult {
  Point point;
  std::vector<IterationRecord> records;
  StopReason reason = StopReason::kMaxIterations;
  double final_cost = 0.0;
  double final_gradnorm = 0.0;
  double total_ms = 0.0;
};

enum class TcgStop { kInteriorConverged, kNegativeCurvature, kBoundary, kModelIncreased,
                     kMaxIterations, kZeroGradient };

template <class Vector>
struct TcgResult {
  Vector eta;
  Vector h_eta;
  int inner_iterations = 0;
  TcgStop stop = TcgStop::kMaxIterations;
  /// <grad, eta>_g + <H eta, eta>_g / 2.
  double model_value = 0.0;
  bool used_cauchy = false;
};

/// Steihaug-Toint truncated CG for min <g, eta> + <H eta, eta>/2 subject to
/// |eta|_g <= radius, all inner products in the metric at x. The returned
/// step never has a worse model value than the Cauchy point.
template <RiemannianManifold M>
TcgResult<typename M::Vector> truncated_cg_subproblem(
    const M& m, const typename M::Point& x, const typename M::Vector& grad,
    const std::function<typename M::Vector(const typename M::Vector&)>& hess, double radius,
    const SolverConfig& cfg) {
  using V = typename M::Vector;
  const auto ip = [&](const V& a, const V& b) { return m.inner(x, a, b); };

  TcgResult<V> out{m.zero_vector(x), m.zero_vector(x)};
  const double r0 = std::sqrt(std::max(0.0, ip(grad, grad)));
  if (r0 == 0.0) {
    out.stop = TcgStop::kZeroGradient;
    return out;
  }

  V r = grad;
  V delta = -1.0 * grad;
  double z_r = r0 * r0;
  double d_pd = z_r;
  double e_pe = 0.0;
  double e_pd = 0.0;
  double model = 0.0;
  const double radius2 = radius * radius;

  V h_grad = m.zero_vector(x);  // H(-grad), kept for the Cauchy safeguard
  bool have_h_grad = false;

  int j = 0;
  for (; j < cfg.inner_max_iterations; ++j) {
    const V h_delta = hess(delta);
    if (j == 0) {
      h_grad = h_delta;
      have_h_grad = true;
    }
    const double d_hd = ip(delta, h_delta);
    const double alpha = z_r / d_hd;
    const double e_pe_new = e_pe + 2.0 * alpha * e_pd + alpha * alpha * d_pd;

    if (!(d_hd > 0.0) || e_pe_new >= radius2) {
      const double tau = (-e_pd + std::sqrt(e_pd * e_pd + d_pd * (radius2 - e_pe))) / d_pd;
      out.eta = out.eta + tau * delta;
      out.h_eta = out.h_eta + tau * h_delta;
      out.stop = d_hd > 0.0 ? TcgStop::kBoundary : TcgStop::kNegativeCurvature;
      ++j;
      break;
    }

    e_pe = e_pe_new;
    V new_eta = out.eta + alpha * delta;
    V new_h_eta = out.h_eta + alpha * h_delta;
    const double new_model = ip(new_eta, grad) + 0.5 * ip(new_eta, new_h_eta);
    if (new_model >= model) {
      out.stop = TcgStop::kModelIncreased;
      ++j;
      break;
    }
    out.eta = std::move(new_eta);
    out.h_eta = std::move(new_h_eta);
    model = new_model;

    r = m.project(x, V(r + alpha * h_delta));
    const double r_norm = std::sqrt(std::max(0.0, ip(r, r)));
    if (r_norm <= r0 * std::min(std::pow(r0, cfg.theta), cfg.kappa)) {
      out.stop = TcgStop::kInteriorConverged;
      ++j;
      break;
    }
    const double z_r_old = z_r;
    z_r = ip(r, r);
    const double beta = z_r / z_r_old;
    delta = beta * delta - r;
    e_pd = beta * (e_pd + alpha * d_pd);
    d_pd = z_r + beta * beta * d_pd;
  }
  out.inner_iterations = j;
  out.model_value = ip(out.eta, grad) + 0.5 * ip(out.eta, out.h_eta);

  if (have_h_grad) {
    // Cauchy point along -grad; h_grad holds H(-grad).
    const double g_hg = -ip(grad, h_grad);
    double tau = radius / r0;
    if (g_hg > 0.0) tau = std::min(tau, (r0 * r0) / g_hg);
    const V eta_c = (-tau) * grad;
    const V h_eta_c = tau * h_grad;
    const double model_c = ip(eta_c, grad) + 0.5 * ip(eta_c, h_eta_c);
    if (model_c < out.model_value) {
      out.eta = eta_c;
      out.h_eta = h_eta_c;
      out.model_value = model_c;
      out.used_cauchy = true;
    }
  }
  return out;
}

namespace detail {

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

template <RiemannianManifold M>
void check_point(const M& m, const typename M::Point& x, const SolverConfig& cfg, int iter) {
  const double res = m.point_residual(x);
  if (!(res <= cfg.point_tolerance)) {
    throw InvariantError("solver left the manifold at iteration " + std::to_string(iter) +
                         " (residual " + std::to_string(res) + ")");
  }
}

inline void check_finite(double v, const char* what, int iter) {
  if (!std::isfinite(v)) {
    throw NumericalError(std::string(what) + " is not finite at iteration " + std::to_string(iter));
  }
}

/// Slack for "cost did not increase" comparisons near convergence, where
/// cost differences fall below rounding of the cost itself.
inline double cost_slack(double f) {
  return 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f));
}

}  // namespace detail

/// Riemannian trust region with the truncated-CG subproblem. Steps are
/// accepted when rho > rho_accept and the cost does not increase (up to
/// rounding slack); the radius shrinks when rho < shrink_below and grows
/// (capped at max_radius) when rho > rho_expand on a boundary step.
template <RiemannianManifold M>
SolveResult<typename M::Point> trust_region(const M& m,
                                            const AmbientProblem<typename M::Vector>& problem,
                                            typename M::Point x0, SolverConfig cfg = {}) {
  using V = typename M::Vector;
  cfg.validate();
  const double max_radius = cfg.max_radius > 0.0 ? cfg.max_radius : m.typical_distance();
  double radius = cfg.initial_radius > 0.0 ? cfg.initial_radius : max_radius / 8.0;
  radius = std::min(radius, max_radius);

  detail::Stopwatch clock(cfg.record_timing);
  SolveResult<typename M::Point> result{std::move(x0), {}};
  auto& x = result.point;

  V coords = m.coords(x);
  double fx = problem.cost(coords);
  V egrad = problem.egrad(coords);
  V grad = m.rgrad(x, egrad);
  double gn = metric_norm(m, x, grad);
  detail::check_finite(fx, "cost", 0);
  result.records.push_back({0, fx, gn, radius, 0, 0.0, clock.ms()});

  for (int k = 1;; ++k) {
    if (gn <= cfg.gradient_norm_tolerance) {
      result.reason = StopReason::kConverged;
      break;
    }
    if (k > cfg.max_outer_iterations) {
      result.reason = StopReason::kMaxIterations;
      break;
    }
    const std::function<V(const V&)> hess = [&](const V& xi) {
      return V(m.rhess11(x, egrad, problem.ehess(coords, xi), xi));
    };
    const TcgResult<V> step = truncated_cg_subproblem(m, x, grad, hess, radius, cfg);

    auto x_new = m.retract(x, step.eta);
    const V coords_new = m.coords(x_new);
    const double f_new = problem.cost(coords_new);

    const double slack = detail::cost_slack(fx);
    const double actual = fx - f_new + slack;
    const double predicted = -step.model_value + slack;
    const double rho = actual / predicted;

    const double step_norm = metric_norm(m, x, step.eta);
    const bool on_boundary = step_norm >= 0.99 * radius;
    if (rho < cfg.shrink_below || !std::isfinite(rho)) {
      radius *= cfg.shrink_factor;
    } else if (rho > cfg.rho_expand && on_boundary) {
      radius = std::min(2.0 * radius, max_radius);
    }

    const bool accept = std::isfinite(f_new) && rho > cfg.rho_accept && f_new <= fx + slack;
    if (accept) {
      x = std::move(x_new);
      detail::check_point(m, x, cfg, k);
      coords = coords_new;
      fx = f_new;
      egrad = problem.egrad(coords);
      grad = m.rgrad(x, egrad);
      gn = metric_norm(m, x, grad);
      detail::check_finite(gn, "gradient norm", k);
    }
    result.records.push_back({k, fx, gn, radius, step.inner_iterations, rho, clock.ms()});

    if (radius < 1e-14 * max_radius) {
      result.reason = StopReason::kStagnated;
      break;
    }
  }
  result.final_cost = fx;
  result.final_gradnorm = gn;
  result.total_ms = clock.ms();
  return result;
}

/// Steepest descent with Armijo backtracking along -grad. The first trial
/// step is initial_step, later ones scale the previously accepted step by
/// step_growth.
/// Running out of backtracks stops the run with StopReason::kStagnated and
/// the last iterate.
template <RiemannianManifold M>
SolveResult<typename M::Point> steepest_descent(const M& m,
                                                const AmbientProblem<typename M::Vector>& problem,
                                                typename M::Point x0, SolverConfig cfg = {}) {
  using V = typename M::Vector;
  cfg.validate();
  detail::Stopwatch clock(cfg.record_timing);
  SolveResult<typename M::Point> result{std::move(x0), {}};
  auto& x = result.point;

  double fx = problem.cost(m.coords(x));
  V grad = m.rgrad(x, problem.egrad(m.coords(x)));
  double gn = metric_norm(m, x, grad);
  detail::check_finite(fx, "cost", 0);
  result.records.push_back({0, fx, gn, 0.0, 0, 0.0, clock.ms()});

  double step = cfg.initial_step;
  for (int k = 1;; ++k) {
    if (gn <= cfg.gradient_norm_tolerance) {
      result.reason = StopReason::kConverged;
      break;
    }
    if (k > cfg.max_outer_iterations) {
      result.reason = StopReason::kMaxIterations;
      break;
    }
    const double slope = -gn * gn;
    bool found = false;
    int tries = 0;
    for (; tries < cfg.max_backtracks; ++tries) {
      auto x_new = m.retract(x, V((-step) * grad));
      const double f_new = problem.cost(m.coords(x_new));
      if (std::isfinite(f_new) && f_new < fx && f_new <= fx + cfg.armijo_c * step * slope) {
        x = std::move(x_new);
        fx = f_new;
        found = true;
        break;
      }
      step *= cfg.backtrack_factor;
    }
    if (!found) {
      result.reason = StopReason::kStagnated;
      break;
    }
    detail::check_point(m, x, cfg, k);
    grad = m.rgrad(x, problem.egrad(m.coords(x)));
    gn = metric_norm(m, x, grad);
    detail::check_finite(gn, "gradient norm", k);
    result.records.push_back({k, fx, gn, step, tries, 0.0, clock.ms()});
    step *= cfg.step_growth;
  }
  result.final_cost = fx;
  result.final_gradnorm = gn;
  result.total_ms = clock.ms();
  return result;
}

}  // namespace riemhess
