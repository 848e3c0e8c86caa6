#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <string>
#include <vector>

#include "riemhess/framework.hpp"
#include "riemhess/manifold.hpp"

/// Reusable property checks over any manifold implementing the contract.
/// Each trial i draws from an Rng seeded with seed + i, so the worst trial
/// can be replayed from the reported seed. Failures are reported, never
/// thrown; an exception inside a trial counts as an infinite error.
namespace riemhess::diagnostics {

struct CheckReport {
  std::string check;
  std::string manifold;
  int trials = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::uint64_t worst_seed = 0;
  std::string note;  // message of the first exception, if any
};

/// Tolerances: algebraic identities versus finite-difference limited checks.
inline constexpr double kAlgebraicTol = 1e-9;
inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kFdTol = 1e-5;
inline constexpr double kDualityTol = 1e-8;

/// Central-difference step h = 1e-6 (1 + |x|).
inline double fd_step(double point_norm) { return 1e-6 * (1.0 + point_norm); }

template <RiemannianManifold M>
double ambient_norm(const M& m, const typename M::Vector& v) {
  return m.to_ambient(v).norm();
}

/// |a - b| / max(1, |a|, |b|) in the ambient norm.
template <RiemannianManifold M>
double rel_error(const M& m, const typename M::Vector& a, const typename M::Vector& b) {
  const double na = ambient_norm(m, a);
  const double nb = ambient_norm(m, b);
  const double diff = m.to_ambient(a - b).norm();
  return diff / std::max({1.0, na, nb});
}

inline double rel_error(double a, double b, double scale = 1.0) {
  return std::abs(a - b) / std::max({scale, std::abs(a), std::abs(b)});
}

namespace detail {

template <class F>
CheckReport run_trials(std::string check, std::string manifold, int trials, std::uint64_t seed,
                       double tolerance, F&& trial) {
  CheckReport report{std::move(check), std::move(manifold), trials, 0.0, tolerance, true, seed, {}};
  double worst = -1.0;
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    Rng rng(s);
    double err = 0.0;
    try {
      err = trial(rng);
    } catch (const std::exception& e) {
      err = std::numeric_limits<double>::infinity();
      if (report.note.empty()) report.note = e.what();
    }
    if (std::isnan(err)) err = std::numeric_limits<double>::infinity();
    if (err > worst) {
      worst = err;
      report.worst_seed = s;
    }
  }
  report.max_error = std::max(worst, 0.0);
  report.passed = report.max_error <= tolerance;
  return report;
}

template <RiemannianManifold M>
double point_norm(const M& m, const typename M::Point& x) {
  return ambient_norm(m, typename M::Vector(m.coords(x)));
}

}  // namespace detail

/// Constraint (J or horizontality) residual of Pi w, and Pi Pi w - Pi w.
template <RiemannianManifold M>
CheckReport check_projection(const M& m, int trials, std::uint64_t seed) {
  return detail::run_trials("projection", m.name(), trials, seed, kAlgebraicTol, [&](Rng& rng) {
    const auto x = m.random_point(rng);
    const typename M::Vector w = m.random_ambient(x, rng);
    const typename M::Vector p = m.project(x, w);
    const typename M::Vector pp = m.project(x, p);
    const double scale = std::max(1.0, ambient_norm(m, w));
    return std::max(m.constraint_residual(x, p) / scale, rel_error(m, pp, p));
  });
}

/// <g Pi w1, w2> = <w1, g Pi w2>.
template <RiemannianManifold M>
CheckReport check_projection_self_adjoint(const M& m, int trials, std::uint64_t seed) {
  return detail::run_trials("projection_self_adjoint", m.name(), trials, seed, kSymmetryTol,
                            [&](Rng& rng) {
    const auto x = m.random_point(rng);
    const typename M::Vector w1 = m.random_ambient(x, rng);
    const typename M::Vector w2 = m.random_ambient(x, rng);
    const double a = m.inner(x, m.project(x, w1), w2);
    const double b = m.inner(x, w1, m.project(x, w2));
    return rel_error(a, b);
  });
}

/// Pi (Gamma(xi, eta) - Gamma(eta, xi)) = 0. On a quotient the difference
/// itself may be vertical; only its horizontal part must vanish.
template <RiemannianManifold M>
CheckReport check_torsion(const M& m, int trials, std::uint64_t seed) {
  return detail::run_trials("torsion", m.name(), trials, seed, kSymmetryTol, [&](Rng& rng) {
    const auto x = m.random_point(rng);
    const typename M::Vector xi = m.random_tangent(x, rng);
    const typename M::Vector eta = m.random_tangent(x, rng);
    const typename M::Vector a = m.project(x, m.gamma(x, xi, eta));
    const typename M::Vector b = m.project(x, m.gamma(x, eta, xi));
    return rel_error(m, a, b);
  });
}

/// d/dt <xi(t), g eta(t)> = <nabla_u xi, g eta> + <xi, g nabla_u eta> along
/// c(t) = retract(x, t u), with fields extended as xi(t) = Pi(c(t)) xi and
/// nabla_u xi = D_u xi + Gamma(u, xi).
template <RiemannianManifold M>
CheckReport check_metric_compatibility(const M& m, int trials, std::uint64_t seed) {
  using V = typename M::Vector;
  return detail::run_trials("metric_compatibility", m.name(), trials, seed, kFdTol,
                            [&](Rng& rng) {
    const auto x = m.random_point(rng);
    const V u = m.random_tangent(x, rng);
    const V xi = m.random_tangent(x, rng);
    const V eta = m.random_tangent(x, rng);
    const double h = fd_step(detail::point_norm(m, x));
    const auto cp = m.retract(x, V(h * u));
    const auto cm = m.retract(x, V((-h) * u));
    const V xi_p = m.project(cp, xi);
    const V xi_m = m.project(cm, xi);
    const V eta_p = m.project(cp, eta);
    const V eta_m = m.project(cm, eta);
    const double lhs = (m.inner(cp, xi_p, eta_p) - m.inner(cm, xi_m, eta_m)) / (2.0 * h);
    const V d_xi = (1.0 / (2.0 * h)) * V(xi_p - xi_m);
    const V d_eta = (1.0 / (2.0 * h)) * V(eta_p - eta_m);
    const V nabla_xi = d_xi + m.gamma(x, u, xi);
    const V nabla_eta = d_eta + m.gamma(x, u, eta);
    const double rhs = m.inner(x, nabla_xi, eta) + m.inner(x, xi, nabla_eta);
    return rel_error(lhs, rhs);
  });
}

/// rhess02(xi, eta) = <rhess11 xi, g eta> and rhess02 symmetry, relative to
/// scale = 1 + |ehess xi| |eta| + |egrad|.
template <RiemannianManifold M>
CheckReport check_hessian_duality(const M& m, const AmbientProblem<typename M::Vector>& f,
                                  int trials, std::uint64_t seed) {
  using V = typename M::Vector;
  return detail::run_trials("hessian_duality", m.name(), trials, seed, kDualityTol,
                            [&](Rng& rng) {
    const auto x = m.random_point(rng);
    const V coords = m.coords(x);
    const V xi = m.random_tangent(x, rng);
    const V eta = m.random_tangent(x, rng);
    const V egrad = f.egrad(coords);
    const V h_xi = f.ehess(coords, xi);
    const V h_eta = f.ehess(coords, eta);
    const double scale = 1.0 + ambient_norm(m, h_xi) * ambient_norm(m, eta) + ambient_norm(m, egrad);
    const double op = m.inner(x, m.rhess11(x, egrad, h_xi, xi), eta);
    const double form = m.rhess02(x, egrad, trr_inner(m.to_ambient(h_xi), m.to_ambient(eta)), xi, eta);
    const double form_t =
        m.rhess02(x, egrad, trr_inner(m.to_ambient(h_eta), m.to_ambient(xi)), eta, xi);
    return std::max(std::abs(op - form), std::abs(form - form_t)) / scale;
  });
}

/// Central difference of the cost along retract(x, t xi) versus <rgrad, g xi>.
template <RiemannianManifold M>
CheckReport check_gradient_fd(const M& m, const AmbientProblem<typename M::Vector>& f, int trials,
                              std::uint64_t seed) {
  using V = typename M::Vector;
  return detail::run_trials("gradient_fd", m.name(), trials, seed, kFdTol, [&](Rng& rng) {
    const auto x = m.random_point(rng);
    const V xi = m.random_tangent(x, rng);
    const double h = fd_step(detail::point_norm(m, x));
    const double fp = f.cost(m.coords(m.retract(x, V(h * xi))));
    const double fm = f.cost(m.coords(m.retract(x, V((-h) * xi))));
    const double fd = (fp - fm) / (2.0 * h);
    const double exact = m.inner(x, m.rgrad(x, f.egrad(m.coords(x))), xi);
    return rel_error(fd, exact);
  });
}

/// rhess11 xi against the covariant derivative of the gradient field:
/// D_xi grad (central differences along retract(x, t xi)) + Gamma(xi, grad).
template <RiemannianManifold M>
CheckReport check_hessian_fd(const M& m, const AmbientProblem<typename M::Vector>& f, int trials,
                             std::uint64_t seed) {
  using V = typename M::Vector;
  return detail::run_trials("hessian_fd", m.name(), trials, seed, kFdTol, [&](Rng& rng) {
    const auto x = m.random_point(rng);
    const V xi = m.random_tangent(x, rng);
    const double h = fd_step(detail::point_norm(m, x));
    const auto grad_at = [&](const typename M::Point& y) {
      return V(m.rgrad(y, f.egrad(m.coords(y))));
    };
    const V g0 = grad_at(x);
    const V dg = (1.0 / (2.0 * h)) *
                 V(grad_at(m.retract(x, V(h * xi))) - grad_at(m.retract(x, V((-h) * xi))));
    const V cov = dg + m.gamma(x, xi, g0);
    const V exact = m.rhess11(x, f.egrad(m.coords(x)), f.ehess(m.coords(x), xi), xi);
    return rel_error(m, cov, exact);
  });
}

/// Closed-form project, rgrad, Gamma and rhess11 against the generic
/// framework evaluated on m.structure(x).
template <RiemannianManifold M>
CheckReport check_closed_form_vs_framework(const M& m, const AmbientProblem<typename M::Vector>& f,
                                           int trials, std::uint64_t seed) {
  using V = typename M::Vector;
  return detail::run_trials("closed_form_vs_framework", m.name(), trials, seed, kAlgebraicTol,
                            [&](Rng& rng) {
    const auto x = m.random_point(rng);
    const framework::AmbientStructure s = m.structure(x);
    const V w = m.random_ambient(x, rng);
    const V xi = m.random_tangent(x, rng);
    const V eta = m.random_tangent(x, rng);
    const V coords = m.coords(x);
    const V egrad = f.egrad(coords);
    const V h_xi = f.ehess(coords, xi);
    const auto fw = [&](const AmbientVector& a) { return V(m.from_ambient(a)); };
    double err = rel_error(m, m.project(x, w), fw(framework::project(s, m.to_ambient(w))));
    err = std::max(err, rel_error(m, m.rgrad(x, egrad), fw(framework::rgrad(s, m.to_ambient(egrad)))));
    err = std::max(err, rel_error(m, m.gamma(x, xi, eta),
                                  fw(framework::gamma(s, m.to_ambient(xi), m.to_ambient(eta)))));
    err = std::max(err, rel_error(m, m.rhess11(x, egrad, h_xi, xi),
                                  fw(framework::rhess11(s, m.to_ambient(egrad), m.to_ambient(h_xi),
                                                        m.to_ambient(xi)))));
    return err;
  });
}

/// Cross-term identity <X(xi, eta), xi0> = <xi, (D_xi0 g) eta>, and D_xi g
/// against central differences of the metric along retract(x, t xi).
template <RiemannianManifold M>
CheckReport check_metric_derivatives(const M& m, int trials, std::uint64_t seed) {
  using V = typename M::Vector;
  return detail::run_trials("metric_derivatives", m.name(), trials, seed, kFdTol, [&](Rng& rng) {
    const auto x = m.random_point(rng);
    const framework::AmbientStructure s = m.structure(x);
    const V xi = m.random_tangent(x, rng);
    const V eta = m.random_tangent(x, rng);
    const V xi0 = m.random_tangent(x, rng);
    const V w = m.random_ambient(x, rng);
    if (!s.d_metric) {
      // Constant metric: D g = 0 must agree with finite differences.
      const double h = fd_step(detail::point_norm(m, x));
      const V dg = (1.0 / (2.0 * h)) * V(m.metric_apply(m.retract(x, V(h * xi)), w) -
                                         m.metric_apply(m.retract(x, V((-h) * xi)), w));
      return ambient_norm(m, dg);
    }
    const double lhs = trr_inner(s.cross_term(m.to_ambient(xi), m.to_ambient(eta)), m.to_ambient(xi0));
    const double rhs = trr_inner(m.to_ambient(xi), s.d_metric(m.to_ambient(xi0), m.to_ambient(eta)));
    const double h = fd_step(detail::point_norm(m, x));
    const V dg = (1.0 / (2.0 * h)) * V(m.metric_apply(m.retract(x, V(h * xi)), w) -
                                       m.metric_apply(m.retract(x, V((-h) * xi)), w));
    const V exact = m.from_ambient(s.d_metric(m.to_ambient(xi), m.to_ambient(w)));
    return std::max(rel_error(lhs, rhs), rel_error(m, dg, exact));
  });
}

}  // namespace riemhess::diagnostics
