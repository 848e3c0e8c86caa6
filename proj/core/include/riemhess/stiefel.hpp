#pragma once

#include <string>

#include "riemhess/manifold.hpp"

namespace riemhess {

/// Orthonormal frame Y (n x d, Y^T Y = I within 1e-10), validated at
/// construction.
class StiefelPoint {
 public:
  explicit StiefelPoint(Matrix y);

  const Matrix& y() const { return y_; }
  int n() const { return static_cast<int>(y_.rows()); }
  int d() const { return static_cast<int>(y_.cols()); }

 private:
  Matrix y_;
};

/// Y^T Y - I in Frobenius norm.
double frame_residual(const Matrix& y);

/// g(Y) w = alpha0 w + (alpha1 - alpha0) Y Y^T w. alpha0 = alpha1 = 1 is the
/// embedded metric, (1, 1/2) the canonical one.
struct StiefelMetric {
  double alpha0 = 1.0;
  double alpha1 = 1.0;
};

/// Options for the framework description of a manifold at a point.
struct StructureOptions {
  /// Register the closed-form inverse of J g^{-1} J^t (otherwise CG).
  bool closed_gram_solver = true;
  /// Register the closed-form projection derivative where one exists.
  bool closed_d_projection = false;
};

class Stiefel {
 public:
  using Point = StiefelPoint;
  using Vector = Matrix;

  Stiefel(int n, int d, StiefelMetric metric = {});

  int n() const { return n_; }
  int d() const { return d_; }
  const StiefelMetric& metric() const { return metric_; }
  std::string name() const;

  const Matrix& coords(const Point& x) const { return x.y(); }
  double inner(const Point& x, const Matrix& a, const Matrix& b) const;
  Matrix metric_apply(const Point& x, const Matrix& w) const;
  Matrix metric_inverse(const Point& x, const Matrix& w) const;

  /// w - Y sym(Y^T w); independent of the metric parameters.
  Matrix project(const Point& x, const Matrix& w) const;
  /// alpha0^{-1} (I - Y Y^T) egrad + alpha1^{-1} Y asym(Y^T egrad).
  Matrix rgrad(const Point& x, const Matrix& egrad) const;
  Matrix christoffel_K(const Point& x, const Matrix& xi, const Matrix& eta) const;
  /// Y sym(xi^T eta) + ((alpha0 - alpha1) / alpha0) (I - Y Y^T)(xi eta^T + eta xi^T) Y.
  Matrix gamma(const Point& x, const Matrix& xi, const Matrix& eta) const;
  Matrix rhess11(const Point& x, const Matrix& egrad, const Matrix& ehess_vec,
                 const Matrix& xi) const;
  double rhess02(const Point& x, const Matrix& egrad, double ehess_bilinear, const Matrix& xi,
                 const Matrix& eta) const;

  /// qr_positive(Y + eta).
  Point retract(const Point& x, const Matrix& eta) const;
  Point random_point(Rng& rng) const;
  /// Projected standard-normal matrix with unit g-norm.
  Matrix random_tangent(const Point& x, Rng& rng) const;
  Matrix random_ambient(const Point& x, Rng& rng) const;
  Matrix zero_vector(const Point& x) const;

  /// |Y^T v + v^T Y|.
  double constraint_residual(const Point& x, const Matrix& v) const;
  double point_residual(const Point& x) const { return frame_residual(x.y()); }

  /// J(w) = Y^T w + w^T Y with its derivatives, and the alpha metric.
  framework::AmbientStructure structure(const Point& x, StructureOptions options = {}) const;
  AmbientVector to_ambient(const Matrix& v) const { return AmbientVector(v); }
  Matrix from_ambient(const AmbientVector& a) const { return a.block(0); }
  double typical_distance() const;

 private:
  int n_;
  int d_;
  StiefelMetric metric_;
};

/// Unit sphere in R^n with the embedded metric and J(w) = x^T w. The
/// smallest nontrivial instance of the constrained framework; used as a
/// ground-truth fixture.
class Sphere {
 public:
  using Point = StiefelPoint;
  using Vector = Matrix;

  explicit Sphere(int n);

  int n() const { return n_; }
  std::string name() const;

  const Matrix& coords(const Point& x) const { return x.y(); }
  double inner(const Point&, const Matrix& a, const Matrix& b) const { return trr_inner(a, b); }
  Matrix metric_apply(const Point&, const Matrix& w) const { return w; }
  Matrix metric_inverse(const Point&, const Matrix& w) const { return w; }
  Matrix project(const Point& x, const Matrix& w) const;
  Matrix rgrad(const Point& x, const Matrix& egrad) const { return project(x, egrad); }
  /// x xi^T eta.
  Matrix gamma(const Point& x, const Matrix& xi, const Matrix& eta) const;
  Matrix rhess11(const Point& x, const Matrix& egrad, const Matrix& ehess_vec,
                 const Matrix& xi) const;
  double rhess02(const Point& x, const Matrix& egrad, double ehess_bilinear, const Matrix& xi,
                 const Matrix& eta) const;
  Point retract(const Point& x, const Matrix& eta) const;
  Point random_point(Rng& rng) const;
  Matrix random_tangent(const Point& x, Rng& rng) const;
  Matrix random_ambient(const Point& x, Rng& rng) const;
  Matrix zero_vector(const Point&) const { return Matrix::Zero(n_, 1); }
  double constraint_residual(const Point& x, const Matrix& v) const;
  double point_residual(const Point& x) const { return frame_residual(x.y()); }
  /// No registered gram solver: every solve goes through CG.
  framework::AmbientStructure structure(const Point& x) const;
  AmbientVector to_ambient(const Matrix& v) const { return AmbientVector(v); }
  Matrix from_ambient(const AmbientVector& a) const { return a.block(0); }
  double typical_distance() const { return 3.141592653589793; }

 private:
  int n_;
};

}  // namespace riemhess
