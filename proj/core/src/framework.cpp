#include "riemhess/framework.hpp"

#include <cmath>

#include "riemhess/errors.hpp"

namespace riemhess::framework {

CgResult conjugate_gradient(const LinearMap& op, const AmbientVector& rhs, int dim,
                            const CgOptions& options) {
  CgResult out{rhs.zeros_like(), 0.0, 0};
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) return out;

  const int cap = options.max_iterations > 0 ? options.max_iterations : 10 * std::max(dim, 1);
  AmbientVector r = rhs;
  AmbientVector p = r;
  double rr = trr_inner(r, r);
  for (int k = 0; k < cap; ++k) {
    const AmbientVector ap = op(p);
    const double curvature = trr_inner(p, ap);
    if (!(curvature > 0.0)) {
      throw SolverError("conjugate_gradient: operator is not positive definite",
                        std::sqrt(rr) / rhs_norm);
    }
    const double step = rr / curvature;
    out.solution += step * p;
    r -= step * ap;
    const double rr_next = trr_inner(r, r);
    out.iterations = k + 1;
    out.relative_residual = std::sqrt(rr_next) / rhs_norm;
    if (out.relative_residual <= options.relative_tolerance) return out;
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  throw SolverError("conjugate_gradient: no convergence after " + std::to_string(cap) +
                        " iterations",
                    out.relative_residual);
}

namespace {

void require_constraint(const AmbientStructure& s, const char* where) {
  if (!s.constraint || !s.constraint_adjoint) {
    throw UnsupportedStructureError(std::string(where) + ": structure has no constraint map J");
  }
}

bool is_flat(const AmbientStructure& s) { return !s.has_constraint() && !s.has_range(); }

// g^{-1} J^t a
AmbientVector lift(const AmbientStructure& s, const AmbientVector& a) {
  return s.metric_inverse(s.constraint_adjoint(a));
}

}  // namespace

AmbientVector solve_JgJt_default(const AmbientStructure& s, const AmbientVector& rhs) {
  require_constraint(s, "solve_JgJt_default");
  const LinearMap gram = [&s](const AmbientVector& a) { return s.constraint(lift(s, a)); };
  return conjugate_gradient(gram, rhs, s.constraint_dim).solution;
}

AmbientVector solve_constraint_gram(const AmbientStructure& s, const AmbientVector& rhs) {
  if (s.constraint_gram_solver) return s.constraint_gram_solver(rhs);
  return solve_JgJt_default(s, rhs);
}

AmbientVector project_nullspace(const AmbientStructure& s, const AmbientVector& w) {
  require_constraint(s, "project_nullspace");
  const AmbientVector multiplier = solve_constraint_gram(s, s.constraint(w));
  return w - lift(s, multiplier);
}

AmbientVector project_range(const AmbientStructure& s, const AmbientVector& w) {
  if (!s.range_map || !s.range_adjoint) {
    throw UnsupportedStructureError("project_range: structure has no range map N");
  }
  const AmbientVector rhs = s.range_adjoint(s.metric(w));
  AmbientVector coeffs;
  if (s.range_gram_solver) {
    coeffs = s.range_gram_solver(rhs);
  } else {
    const LinearMap gram = [&s](const AmbientVector& b) {
      return s.range_adjoint(s.metric(s.range_map(b)));
    };
    coeffs = conjugate_gradient(gram, rhs, s.range_dim).solution;
  }
  return s.range_map(coeffs);
}

AmbientVector project(const AmbientStructure& s, const AmbientVector& w) {
  if (s.has_constraint()) return project_nullspace(s, w);
  if (s.has_range()) return project_range(s, w);
  return w;
}

AmbientVector rgrad(const AmbientStructure& s, const AmbientVector& egrad) {
  return project(s, s.metric_inverse(egrad));
}

AmbientVector christoffel_K(const AmbientStructure& s, const AmbientVector& xi,
                            const AmbientVector& eta) {
  AmbientVector out = xi.zeros_like();
  if (s.d_metric) {
    out += s.d_metric(xi, eta);
    out += s.d_metric(eta, xi);
  }
  if (s.cross_term) out -= s.cross_term(xi, eta);
  return 0.5 * out;
}

AmbientVector d_projection(const AmbientStructure& s, const AmbientVector& xi,
                           const AmbientVector& w) {
  if (s.d_projection) return s.d_projection(xi, w);
  if (is_flat(s)) return w.zeros_like();
  if (!s.has_constraint() || !s.d_constraint || !s.d_constraint_adjoint) {
    throw UnsupportedStructureError(
        "d_projection: need a closed-form projection derivative or J with D_xi J and its adjoint");
  }
  // Pi = I - A S^{-1} J with A = g^{-1} J^t, S = J A.
  const auto d_lift = [&](const AmbientVector& a) {
    AmbientVector out = s.metric_inverse(s.d_constraint_adjoint(xi, a));
    if (s.d_metric) out -= s.metric_inverse(s.d_metric(xi, lift(s, a)));
    return out;
  };
  const AmbientVector lambda = solve_constraint_gram(s, s.constraint(w));
  const AmbientVector d_lift_lambda = d_lift(lambda);
  const AmbientVector inner =
      s.d_constraint(xi, lift(s, lambda) - w) + s.constraint(d_lift_lambda);
  return lift(s, solve_constraint_gram(s, inner)) - d_lift_lambda;
}

AmbientVector gamma_constraint(const AmbientStructure& s, const AmbientVector& xi,
                               const AmbientVector& eta) {
  const AmbientVector metric_term = project(s, s.metric_inverse(christoffel_K(s, xi, eta)));
  if (is_flat(s)) return metric_term;
  if (!s.has_constraint() || !s.d_constraint) {
    throw UnsupportedStructureError("gamma_constraint: structure has no D_xi J");
  }
  return lift(s, solve_constraint_gram(s, s.d_constraint(xi, eta))) + metric_term;
}

AmbientVector gamma_projection(const AmbientStructure& s, const AmbientVector& xi,
                               const AmbientVector& eta) {
  return project(s, s.metric_inverse(christoffel_K(s, xi, eta))) - d_projection(s, xi, eta);
}

AmbientVector gamma(const AmbientStructure& s, const AmbientVector& xi, const AmbientVector& eta) {
  if (s.d_projection) return gamma_projection(s, xi, eta);
  if (is_flat(s) || (s.has_constraint() && s.d_constraint)) return gamma_constraint(s, xi, eta);
  throw UnsupportedStructureError("gamma: structure has neither D_xi J nor D_xi Pi");
}

AmbientVector rhess11(const AmbientStructure& s, const AmbientVector& egrad,
                      const AmbientVector& ehess_vec, const AmbientVector& xi) {
  const AmbientVector raised = s.metric_inverse(egrad);
  AmbientVector inner = ehess_vec + s.metric(d_projection(s, xi, raised));
  if (s.d_metric) inner -= s.d_metric(xi, raised);
  inner += christoffel_K(s, xi, project(s, raised));
  return project(s, s.metric_inverse(inner));
}

double rhess02(const AmbientStructure& s, const AmbientVector& egrad, double ehess_bilinear,
               const AmbientVector& xi, const AmbientVector& eta) {
  return ehess_bilinear - trr_inner(gamma(s, xi, eta), egrad);
}

}  // namespace riemhess::framework
