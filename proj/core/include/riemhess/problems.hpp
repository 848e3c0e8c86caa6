#pragma once

#include "riemhess/manifold.hpp"
#include "riemhess/psd_fixed_rank.hpp"

/// Cost functions with closed-form ambient gradients and Hessian-vector
/// products. Each is defined on the whole ambient space so that it can be
/// checked by plain finite differences.
namespace riemhess::problems {

/// Q^T diag(D) Q with D log-uniform in [1, 10].
Matrix random_spd_matrix(int n, Rng& rng);

/// Weights uniform in [0.5, 1.5].
Eigen::VectorXd random_weights(int n, Rng& rng);

/// Diagonal of Lambda for the flag cost: lambda_i = q + 1 - i on block i,
/// and `tail_value` on the trailing block.
Eigen::VectorXd flag_lambda(const BlockPartition& part, double tail_value = 0.5);

/// f(Y) = Tr((Y Lambda Y^T A)^2) with A symmetric.
///   egrad = 4 C Y^T C with C = A Y Lambda
///   ehess xi = 4 (C_dot Y^T C + C xi^T C + C Y^T C_dot), C_dot = A xi Lambda
AmbientProblem<Matrix> flag_quadratic(Matrix a, Eigen::VectorXd lambda);

/// f(Y) = Tr(Y^T A Y) with A symmetric.
AmbientProblem<Matrix> rayleigh(Matrix a);

/// f(x) = c^T x.
AmbientProblem<Matrix> linear(Matrix c);

/// f(Y, P) = Tr W_d (A^2 - A Y P Y^T - Y P Y^T A + Y P^2 Y^T), W_d = diag(w).
/// For symmetric P the gradient is
///   (-4 sym(A W_d) Y P + 2 W_d Y P^2, -2 sym(Y^T W_d (A Y - Y P))).
/// The implemented formulas are exact for this extension at any P.
AmbientProblem<PsdVector> weighted_pca(Matrix a, Eigen::VectorXd w);

/// f(P) = Tr(A P) - log det P, minimized at P = A^{-1}.
AmbientProblem<Matrix> spd_logdet(Matrix a);

/// f(P) = Tr(P) + Tr(P^{-1}), minimized at P = I with value 2n.
AmbientProblem<Matrix> spd_trace_inverse(int n);

/// Wraps a problem so that it reads the ambient coordinates of a point.
template <RiemannianManifold M>
double cost_at(const M& m, const AmbientProblem<typename M::Vector>& f,
               const typename M::Point& x) {
  return f.cost(m.coords(x));
}

}  // namespace riemhess::problems
