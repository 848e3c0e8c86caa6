#pragma once

#include <string>
#include <vector>

#include "riemhess/stiefel.hpp"

namespace riemhess {

/// Quotient St(d, n) / U(d_1) x ... x U(d_q) with the Stiefel alpha metric.
/// Points are Stiefel representatives; tangent vectors are horizontal lifts,
/// characterized by symf(Y^T eta) = 0. With no blocks this is the Stiefel
/// manifold itself; with one block of size d it is the Grassmannian.
class Flag {
 public:
  using Point = StiefelPoint;
  using Vector = Matrix;

  Flag(int n, BlockPartition partition, StiefelMetric metric = {});
  Flag(int n, int d, std::vector<int> blocks, StiefelMetric metric = {});

  int n() const { return n_; }
  int d() const { return partition_.total(); }
  const BlockPartition& partition() const { return partition_; }
  const StiefelMetric& metric() const { return metric_; }
  std::string name() const;

  const Matrix& coords(const Point& x) const { return x.y(); }
  double inner(const Point& x, const Matrix& a, const Matrix& b) const;
  Matrix metric_apply(const Point& x, const Matrix& w) const;
  Matrix metric_inverse(const Point& x, const Matrix& w) const;

  /// w - Y symf(Y^T w).
  Matrix project_horizontal(const Point& x, const Matrix& w) const;
  Matrix project(const Point& x, const Matrix& w) const { return project_horizontal(x, w); }
  Matrix rgrad(const Point& x, const Matrix& egrad) const;
  /// Y symf(xi^T eta) + ((alpha0 - alpha1) / alpha0) Pi0 (xi eta^T + eta xi^T) Y.
  Matrix gamma_horizontal(const Point& x, const Matrix& xi, const Matrix& eta) const;
  Matrix gamma(const Point& x, const Matrix& xi, const Matrix& eta) const {
    return gamma_horizontal(x, xi, eta);
  }
  Matrix rhess11(const Point& x, const Matrix& egrad, const Matrix& ehess_vec,
                 const Matrix& xi) const;
  double rhess02(const Point& x, const Matrix& egrad, double ehess_bilinear, const Matrix& xi,
                 const Matrix& eta) const;

  Point retract(const Point& x, const Matrix& eta) const;
  Point random_point(Rng& rng) const;
  Matrix random_tangent(const Point& x, Rng& rng) const;
  Matrix random_ambient(const Point& x, Rng& rng) const;
  Matrix zero_vector(const Point&) const { return Matrix::Zero(n_, d()); }

  /// |symf(Y^T v)|.
  double constraint_residual(const Point& x, const Matrix& v) const;
  double point_residual(const Point& x) const { return frame_residual(x.y()); }

  /// J(w) = symf(Y^T w), J^t a = Y symf(a).
  framework::AmbientStructure structure(const Point& x, StructureOptions options = {}) const;
  AmbientVector to_ambient(const Matrix& v) const { return AmbientVector(v); }
  Matrix from_ambient(const AmbientVector& a) const { return a.block(0); }
  double typical_distance() const;

  /// Dimension of the range of symf.
  int symf_dim() const;

 private:
  int n_;
  BlockPartition partition_;
  StiefelMetric metric_;
  Stiefel stiefel_;
};

}  // namespace riemhess
