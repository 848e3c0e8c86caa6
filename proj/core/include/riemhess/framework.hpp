#pragma once

#include <functional>
#include <optional>

#include "riemhess/ambient.hpp"

/// Generic ambient-structure engine.
///
/// A manifold (or the horizontal bundle of a quotient) is described at one
/// point by operator callbacks on the ambient space E:
///
///   g, g^{-1}        metric operator and its inverse (self-adjoint, positive)
///   J, J^t           constraint map E -> E_J whose nullspace is the tangent
///                    (horizontal) space, and its adjoint
///   N, N^t           alternatively, an injective map E_N -> E onto that space
///   (D_xi g) w       derivative of the metric along xi, applied to w
///   X(xi, eta)       cross term: <X(xi, eta), xi0> = <xi, (D_xi0 g) eta>
///   (D_xi J) w       derivative of J along xi, and its adjoint in w
///
/// From these the engine produces projections, Riemannian gradients, the
/// Christoffel metric term K, the Christoffel function Gamma, and Hessians.
/// Everything is evaluated at the point the callbacks were built for.
namespace riemhess::framework {

using LinearMap = std::function<AmbientVector(const AmbientVector&)>;
/// (xi, w) -> value, linear in both arguments.
using BilinearMap = std::function<AmbientVector(const AmbientVector&, const AmbientVector&)>;

struct AmbientStructure {
  LinearMap metric;
  LinearMap metric_inverse;

  // Nullspace description. `constraint_dim` is dim(E_J), used to cap CG.
  LinearMap constraint;
  LinearMap constraint_adjoint;
  BilinearMap d_constraint;          // (xi, w) -> (D_xi J) w
  BilinearMap d_constraint_adjoint;  // (xi, a) -> (D_xi J)^t a
  LinearMap constraint_gram_solver;  // a -> (J g^{-1} J^t)^{-1} a, optional
  int constraint_dim = 0;

  // Range description.
  LinearMap range_map;
  LinearMap range_adjoint;
  LinearMap range_gram_solver;  // b -> (N^t g N)^{-1} b, optional
  int range_dim = 0;

  BilinearMap d_metric;    // (xi, w) -> (D_xi g) w; null means constant metric
  BilinearMap cross_term;  // (xi, eta) -> X(xi, eta); null means zero

  // Closed-form (D_xi Pi) w, optional. Without it the derivative is
  // assembled from J, J^t and their derivatives.
  BilinearMap d_projection;

  bool has_constraint() const { return static_cast<bool>(constraint); }
  bool has_range() const { return static_cast<bool>(range_map); }
};

struct CgOptions {
  double relative_tolerance = 1e-12;
  int max_iterations = 0;  // 0: 10 * dimension
};

struct CgResult {
  AmbientVector solution;
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Conjugate gradients for a symmetric positive-definite operator on a
/// space of dimension `dim`. Throws SolverError when the cap is reached
/// before the relative residual drops below tolerance.
CgResult conjugate_gradient(const LinearMap& op, const AmbientVector& rhs, int dim,
                            const CgOptions& options = {});

/// Solves (J g^{-1} J^t) x = rhs with the registered solver if any,
/// otherwise with CG.
AmbientVector solve_constraint_gram(const AmbientStructure& s, const AmbientVector& rhs);

/// CG solve of (J g^{-1} J^t) x = rhs, ignoring any registered solver.
AmbientVector solve_JgJt_default(const AmbientStructure& s, const AmbientVector& rhs);

/// Pi w = w - g^{-1} J^t (J g^{-1} J^t)^{-1} J w.
AmbientVector project_nullspace(const AmbientStructure& s, const AmbientVector& w);

/// Pi w = N (N^t g N)^{-1} N^t g w.
AmbientVector project_range(const AmbientStructure& s, const AmbientVector& w);

/// Nullspace form when J is available, else the range form. With neither,
/// the space is flat and the projection is the identity.
AmbientVector project(const AmbientStructure& s, const AmbientVector& w);

/// Riemannian (horizontal) gradient Pi g^{-1} egrad.
AmbientVector rgrad(const AmbientStructure& s, const AmbientVector& egrad);

/// K(xi, eta) = ((D_xi g) eta + (D_eta g) xi - X(xi, eta)) / 2.
AmbientVector christoffel_K(const AmbientStructure& s, const AmbientVector& xi,
                            const AmbientVector& eta);

/// (D_xi Pi) w. Uses the closed form when registered, otherwise
/// differentiates the nullspace formula using D_xi J and D_xi g.
AmbientVector d_projection(const AmbientStructure& s, const AmbientVector& xi,
                           const AmbientVector& w);

/// Gamma(xi, eta) = g^{-1} J^t (J g^{-1} J^t)^{-1} (D_xi J) eta + Pi g^{-1} K(xi, eta).
AmbientVector gamma_constraint(const AmbientStructure& s, const AmbientVector& xi,
                               const AmbientVector& eta);

/// Gamma(xi, eta) = -(D_xi Pi) eta + Pi g^{-1} K(xi, eta).
AmbientVector gamma_projection(const AmbientStructure& s, const AmbientVector& xi,
                               const AmbientVector& eta);

/// Christoffel function, using the closed-form projection derivative when
/// registered and the constraint form otherwise. For tangent (horizontal)
/// xi, eta the covariant derivative is D_xi eta + Gamma(xi, eta).
AmbientVector gamma(const AmbientStructure& s, const AmbientVector& xi, const AmbientVector& eta);

/// Riemannian Hessian-vector product
///   Pi g^{-1}(ehess + g (D_xi Pi) g^{-1} egrad - (D_xi g) g^{-1} egrad + K(xi, Pi g^{-1} egrad)).
AmbientVector rhess11(const AmbientStructure& s, const AmbientVector& egrad,
                      const AmbientVector& ehess_vec, const AmbientVector& xi);

/// Riemannian Hessian bilinear form f_YY(xi, eta) - <Gamma(xi, eta), egrad>.
double rhess02(const AmbientStructure& s, const AmbientVector& egrad, double ehess_bilinear,
               const AmbientVector& xi, const AmbientVector& eta);

}  // namespace riemhess::framework
