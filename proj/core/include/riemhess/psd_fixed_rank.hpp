#pragma once

#include <string>

#include "riemhess/lyapunov.hpp"
#include "riemhess/spd.hpp"
#include "riemhess/stiefel.hpp"

namespace riemhess {

/// The pair (Y, P) representing S = Y P Y^T with Y^T Y = I and P SPD.
class PsdPoint {
 public:
  PsdPoint(Matrix y, SpdPoint p);
  PsdPoint(StiefelPoint y, SpdPoint p);

  const Matrix& y() const { return y_.y(); }
  const SpdPoint& p() const { return p_; }
  const StiefelPoint& frame() const { return y_; }
  int n() const { return y_.n(); }
  int rank() const { return y_.d(); }
  /// Y P Y^T.
  Matrix matrix() const;

 private:
  StiefelPoint y_;
  SpdPoint p_;
};

/// Ambient element (omega_Y, omega_P) of R^{n x p} x R^{p x p}.
struct PsdVector {
  Matrix y;
  Matrix p;

  PsdVector& operator+=(const PsdVector& o);
  PsdVector& operator-=(const PsdVector& o);
  PsdVector& operator*=(double s);
};

PsdVector operator+(PsdVector a, const PsdVector& b);
PsdVector operator-(PsdVector a, const PsdVector& b);
PsdVector operator-(PsdVector a);
PsdVector operator*(double s, PsdVector a);
PsdVector operator*(PsdVector a, double s);
double trr_inner(const PsdVector& a, const PsdVector& b);

/// g(Y, P) w = (alpha0 w_Y + (alpha1 - alpha0) Y Y^T w_Y, beta P^{-1} w_P P^{-1}).
struct PsdMetric {
  double alpha0 = 1.0;
  double alpha1 = 1.0;
  double beta = 1.0;
};

/// Fixed-rank PSD matrices as the quotient (St(p, n) x S+(p)) / O(p), with
/// vertical directions (Y q, P q - q P) for antisymmetric q.
class PsdFixedRank {
 public:
  using Point = PsdPoint;
  using Vector = PsdVector;

  PsdFixedRank(int n, int p, PsdMetric metric = {});

  int n() const { return n_; }
  int rank() const { return p_; }
  const PsdMetric& metric() const { return metric_; }
  std::string name() const;

  PsdVector coords(const Point& x) const { return {x.y(), x.p().p()}; }
  double inner(const Point& x, const PsdVector& a, const PsdVector& b) const;
  PsdVector metric_apply(const Point& x, const PsdVector& w) const;
  PsdVector metric_inverse(const Point& x, const PsdVector& w) const;
  /// (D_xi g) w.
  PsdVector d_metric(const Point& x, const PsdVector& xi, const PsdVector& w) const;

  /// The L(P) operator for this metric at x.
  LyapunovOperator lyapunov(const Point& x) const;

  /// (beta Y (P^{-1} D - D P^{-1}) + w_Y - Y Y^T w_Y, alpha1 D) with
  /// D = L^{-1} sym(w_P + Y^T w_Y P - P Y^T w_Y).
  PsdVector project_horizontal(const Point& x, const PsdVector& w) const;
  PsdVector project(const Point& x, const PsdVector& w) const { return project_horizontal(x, w); }
  PsdVector rgrad(const Point& x, const PsdVector& egrad) const;
  PsdVector christoffel_K(const Point& x, const PsdVector& xi, const PsdVector& eta) const;
  /// (D_xi Pi_H) w in closed form.
  PsdVector d_projection(const Point& x, const PsdVector& xi, const PsdVector& w) const;
  /// -(D_xi Pi_H) eta + Pi_H g^{-1} K(xi, eta).
  PsdVector gamma(const Point& x, const PsdVector& xi, const PsdVector& eta) const;
  PsdVector rhess11(const Point& x, const PsdVector& egrad, const PsdVector& ehess_vec,
                    const PsdVector& xi) const;
  double rhess02(const Point& x, const PsdVector& egrad, double ehess_bilinear,
                 const PsdVector& xi, const PsdVector& eta) const;

  /// (qr_positive(Y + eta_Y), geodesic P-part at t = 1).
  Point retract(const Point& x, const PsdVector& eta) const;
  SpdPoint geodesic_p_part(const Point& x, const PsdVector& eta, double t) const;
  Point random_point(Rng& rng) const;
  PsdVector random_tangent(const Point& x, Rng& rng) const;
  PsdVector random_ambient(const Point& x, Rng& rng) const;
  PsdVector zero_vector(const Point& x) const;
  /// (Y q, P q - q P).
  PsdVector vertical(const Point& x, const Matrix& q) const;

  /// |alpha1 Y^T v_Y + beta (v_P P^{-1} - P^{-1} v_P)|.
  double horizontality_residual(const Point& x, const PsdVector& v) const;
  /// Norm of the three-block constraint J(v) below (tangency plus horizontality).
  double constraint_residual(const Point& x, const PsdVector& v) const;
  double point_residual(const Point& x) const;

  /// Framework description with J(w) = (Y^T w_Y + w_Y^T Y, w_P - w_P^T,
  /// asym(alpha1 Y^T w_Y + beta (w_P P^{-1} - P^{-1} w_P))), solved by CG,
  /// plus the range form N(B, D) = (beta Y (P^{-1} D - D P^{-1}) + Y_perp B,
  /// alpha1 D). Y_perp is computed here, never on the hot path.
  framework::AmbientStructure structure(const Point& x, StructureOptions options = {}) const;
  AmbientVector to_ambient(const PsdVector& v) const { return AmbientVector{v.y, v.p}; }
  PsdVector from_ambient(const AmbientVector& a) const { return {a.block(0), a.block(1)}; }
  double typical_distance() const;

 private:
  int n_;
  int p_;
  PsdMetric metric_;
};

}  // namespace riemhess
