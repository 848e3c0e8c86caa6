#pragma once

#include <string>

#include "riemhess/manifold.hpp"
#include "riemhess/stiefel.hpp"

namespace riemhess {

/// Symmetric positive-definite matrix with its eigendecomposition and the
/// derived matrix functions cached at construction.
class SpdPoint {
 public:
  /// Validates symmetry (1e-10 relative) and min eig > 1e-12 max eig.
  explicit SpdPoint(Matrix p);
  /// Builds the point from its eigendecomposition. Only positivity and
  /// finiteness of the eigenvalues are required, so points far out along a
  /// geodesic remain representable even when badly conditioned.
  static SpdPoint from_eigen(SymmetricEigen eig);

  const Matrix& p() const { return p_; }
  const Matrix& inverse() const { return inv_; }
  const Matrix& sqrt() const { return sqrt_; }
  const Matrix& inv_sqrt() const { return inv_sqrt_; }
  const SymmetricEigen& eig() const { return eig_; }
  int n() const { return static_cast<int>(p_.rows()); }

 private:
  SpdPoint() = default;
  void cache_functions();

  Matrix p_;
  SymmetricEigen eig_;
  Matrix inv_;
  Matrix sqrt_;
  Matrix inv_sqrt_;
};

/// P^{1/2} exp(t P^{-1/2} xi P^{-1/2}) P^{1/2}: the affine-invariant geodesic.
/// Evaluated as B B^T with B = P^{1/2} V exp(D/2), where V D V^T is the
/// exponent, and factored by a one-sided Jacobi SVD of B; this keeps tiny
/// eigenvalues accurate relative to their own size.
SpdPoint spd_geodesic(const SpdPoint& x, const Matrix& xi, double t = 1.0);

/// S+(n) with the affine-invariant metric g(P) w = P^{-1} w P^{-1}.
class Spd {
 public:
  using Point = SpdPoint;
  using Vector = Matrix;

  explicit Spd(int n);

  int n() const { return n_; }
  std::string name() const;

  const Matrix& coords(const Point& x) const { return x.p(); }
  double inner(const Point& x, const Matrix& a, const Matrix& b) const;
  Matrix metric_apply(const Point& x, const Matrix& w) const;
  Matrix metric_inverse(const Point& x, const Matrix& w) const;
  Matrix project(const Point& x, const Matrix& w) const;
  /// P sym(egrad) P.
  Matrix rgrad(const Point& x, const Matrix& egrad) const;
  /// -(xi P^{-1} eta + eta P^{-1} xi) / 2.
  Matrix gamma(const Point& x, const Matrix& xi, const Matrix& eta) const;
  Matrix connection(const Point& x, const Matrix& xi, const Matrix& eta) const {
    return gamma(x, xi, eta);
  }
  /// P sym(ehess) P + sym(xi sym(egrad) P).
  Matrix rhess11(const Point& x, const Matrix& egrad, const Matrix& ehess_vec,
                 const Matrix& xi) const;
  double rhess02(const Point& x, const Matrix& egrad, double ehess_bilinear, const Matrix& xi,
                 const Matrix& eta) const;

  Point exp_map(const Point& x, const Matrix& xi) const { return spd_geodesic(x, xi); }
  Point retract(const Point& x, const Matrix& eta) const { return exp_map(x, eta); }
  /// Eigenvalues log-uniform in [0.5, 2].
  Point random_point(Rng& rng) const;
  Matrix random_tangent(const Point& x, Rng& rng) const;
  Matrix random_ambient(const Point& x, Rng& rng) const;
  Matrix zero_vector(const Point&) const { return Matrix::Zero(n_, n_); }

  /// |v - v^T|.
  double constraint_residual(const Point& x, const Matrix& v) const;
  double point_residual(const Point& x) const;

  /// J(w) = w - w^T with the affine-invariant metric.
  framework::AmbientStructure structure(const Point& x, StructureOptions options = {}) const;
  AmbientVector to_ambient(const Matrix& v) const { return AmbientVector(v); }
  Matrix from_ambient(const AmbientVector& a) const { return a.block(0); }
  double typical_distance() const { return std::sqrt(static_cast<double>(n_)); }

 private:
  int n_;
};

}  // namespace riemhess
