#include "riemhess/psd_fixed_rank.hpp"

#include <cmath>

#include <fmt/format.h>

#include "riemhess/errors.hpp"

namespace riemhess {

PsdPoint::PsdPoint(Matrix y, SpdPoint p) : PsdPoint(StiefelPoint(std::move(y)), std::move(p)) {}

PsdPoint::PsdPoint(StiefelPoint y, SpdPoint p) : y_(std::move(y)), p_(std::move(p)) {
  if (y_.d() != p_.n()) {
    throw DimensionError(fmt::format("PsdPoint: Y has {} columns but P is {}x{}", y_.d(), p_.n(),
                                     p_.n()));
  }
}

Matrix PsdPoint::matrix() const { return y() * p_.p() * y().transpose(); }

PsdVector& PsdVector::operator+=(const PsdVector& o) {
  y += o.y;
  p += o.p;
  return *this;
}
PsdVector& PsdVector::operator-=(const PsdVector& o) {
  y -= o.y;
  p -= o.p;
  return *this;
}
PsdVector& PsdVector::operator*=(double s) {
  y *= s;
  p *= s;
  return *this;
}
PsdVector operator+(PsdVector a, const PsdVector& b) { return a += b; }
PsdVector operator-(PsdVector a, const PsdVector& b) { return a -= b; }
PsdVector operator-(PsdVector a) { return a *= -1.0; }
PsdVector operator*(double s, PsdVector a) { return a *= s; }
PsdVector operator*(PsdVector a, double s) { return a *= s; }
double trr_inner(const PsdVector& a, const PsdVector& b) {
  return trr_inner(a.y, b.y) + trr_inner(a.p, b.p);
}

PsdFixedRank::PsdFixedRank(int n, int p, PsdMetric metric) : n_(n), p_(p), metric_(metric) {
  if (p < 1 || n < p) {
    throw DimensionError(fmt::format("PsdFixedRank: need n >= p >= 1, got n={} p={}", n, p));
  }
  if (!(metric.alpha0 > 0.0) || !(metric.alpha1 > 0.0) || !(metric.beta > 0.0)) {
    throw ParameterError(fmt::format("PsdFixedRank: metric parameters must be positive, got ({}, {}, {})",
                                     metric.alpha0, metric.alpha1, metric.beta));
  }
}

std::string PsdFixedRank::name() const {
  return fmt::format("psd_fixed_rank(n={},p={},alpha0={},alpha1={},beta={})", n_, p_,
                     metric_.alpha0, metric_.alpha1, metric_.beta);
}

double PsdFixedRank::inner(const Point& x, const PsdVector& a, const PsdVector& b) const {
  return trr_inner(a, metric_apply(x, b));
}

PsdVector PsdFixedRank::metric_apply(const Point& x, const PsdVector& w) const {
  const Matrix& y = x.y();
  const Matrix& pinv = x.p().inverse();
  return {metric_.alpha0 * w.y + (metric_.alpha1 - metric_.alpha0) * (y * (y.transpose() * w.y)),
          metric_.beta * (pinv * w.p * pinv)};
}

PsdVector PsdFixedRank::metric_inverse(const Point& x, const PsdVector& w) const {
  const Matrix& y = x.y();
  const Matrix& p = x.p().p();
  return {w.y / metric_.alpha0 +
              (1.0 / metric_.alpha1 - 1.0 / metric_.alpha0) * (y * (y.transpose() * w.y)),
          (p * w.p * p) / metric_.beta};
}

PsdVector PsdFixedRank::d_metric(const Point& x, const PsdVector& xi, const PsdVector& w) const {
  const Matrix& y = x.y();
  const Matrix& pinv = x.p().inverse();
  const Matrix a = pinv * xi.p * pinv;
  const Matrix b = pinv * w.p * pinv;
  return {(metric_.alpha1 - metric_.alpha0) *
              (xi.y * (y.transpose() * w.y) + y * (xi.y.transpose() * w.y)),
          -metric_.beta * (a * w.p * pinv + b * xi.p * pinv)};
}

LyapunovOperator PsdFixedRank::lyapunov(const Point& x) const {
  return LyapunovOperator::psd_horizontal(x.p(), metric_.alpha1, metric_.beta);
}

PsdVector PsdFixedRank::project_horizontal(const Point& x, const PsdVector& w) const {
  require_same_shape(x.y(), w.y, "PsdFixedRank::project_horizontal (Y part)");
  require_same_shape(x.p().p(), w.p, "PsdFixedRank::project_horizontal (P part)");
  const Matrix& y = x.y();
  const Matrix& p = x.p().p();
  const Matrix& pinv = x.p().inverse();
  const Matrix m = y.transpose() * w.y;
  const Matrix d = lyapunov(x).solve(sym(w.p + m * p - p * m));
  return {metric_.beta * (y * (pinv * d - d * pinv)) + w.y - y * m, metric_.alpha1 * d};
}

PsdVector PsdFixedRank::rgrad(const Point& x, const PsdVector& egrad) const {
  return project_horizontal(x, metric_inverse(x, egrad));
}

PsdVector PsdFixedRank::christoffel_K(const Point& x, const PsdVector& xi,
                                      const PsdVector& eta) const {
  const Matrix& y = x.y();
  const Matrix& pinv = x.p().inverse();
  const Matrix ytxi = y.transpose() * xi.y;
  const Matrix yteta = y.transpose() * eta.y;
  const Matrix ky = y * (eta.y.transpose() * xi.y + xi.y.transpose() * eta.y) +
                    xi.y * yteta + eta.y * ytxi - xi.y * yteta.transpose() -
                    eta.y * ytxi.transpose();
  const Matrix a = pinv * eta.p * pinv;
  const Matrix b = pinv * xi.p * pinv;
  return {0.5 * (metric_.alpha1 - metric_.alpha0) * ky,
          -0.5 * metric_.beta * (a * xi.p * pinv + b * eta.p * pinv)};
}

PsdVector PsdFixedRank::d_projection(const Point& x, const PsdVector& xi,
                                     const PsdVector& w) const {
  const Matrix& y = x.y();
  const Matrix& p = x.p().p();
  const Matrix& pinv = x.p().inverse();
  const double beta = metric_.beta;
  const LyapunovOperator lyap = lyapunov(x);

  const Matrix m = y.transpose() * w.y;
  const Matrix d = lyap.solve(sym(w.p + m * p - p * m));

  const Matrix m_dot = xi.y.transpose() * w.y;
  const Matrix pinv_xi_pinv = pinv * xi.p * pinv;
  const Matrix rhs = sym(m_dot * p - p * m_dot + m * xi.p - xi.p * m) -
                     beta * (xi.p * d * pinv + pinv * d * xi.p - p * d * pinv_xi_pinv -
                             pinv_xi_pinv * d * p);
  const Matrix d_dot = lyap.solve(rhs);

  const Matrix out_y = beta * (xi.y * (pinv * d - d * pinv)) +
                       beta * (y * (pinv * d_dot - d_dot * pinv + d * pinv_xi_pinv -
                                    pinv_xi_pinv * d)) -
                       xi.y * (y.transpose() * w.y) - y * (xi.y.transpose() * w.y);
  return {out_y, metric_.alpha1 * d_dot};
}

PsdVector PsdFixedRank::gamma(const Point& x, const PsdVector& xi, const PsdVector& eta) const {
  return project_horizontal(x, metric_inverse(x, christoffel_K(x, xi, eta))) -
         d_projection(x, xi, eta);
}

PsdVector PsdFixedRank::rhess11(const Point& x, const PsdVector& egrad,
                                const PsdVector& ehess_vec, const PsdVector& xi) const {
  const PsdVector raised = metric_inverse(x, egrad);
  PsdVector inner = ehess_vec + metric_apply(x, d_projection(x, xi, raised));
  inner -= d_metric(x, xi, raised);
  inner += christoffel_K(x, xi, project_horizontal(x, raised));
  return project_horizontal(x, metric_inverse(x, inner));
}

double PsdFixedRank::rhess02(const Point& x, const PsdVector& egrad, double ehess_bilinear,
                             const PsdVector& xi, const PsdVector& eta) const {
  return ehess_bilinear - trr_inner(gamma(x, xi, eta), egrad);
}

PsdPoint PsdFixedRank::retract(const Point& x, const PsdVector& eta) const {
  require_same_shape(x.y(), eta.y, "PsdFixedRank::retract");
  return PsdPoint(StiefelPoint(qr_positive(x.y() + eta.y).q), geodesic_p_part(x, eta, 1.0));
}

SpdPoint PsdFixedRank::geodesic_p_part(const Point& x, const PsdVector& eta, double t) const {
  return spd_geodesic(x.p(), eta.p, t);
}

PsdPoint PsdFixedRank::random_point(Rng& rng) const {
  Matrix y = random_orthonormal(n_, p_, rng);
  return PsdPoint(StiefelPoint(std::move(y)), SpdPoint(random_spd(p_, 0.5, 2.0, rng)));
}

PsdVector PsdFixedRank::random_tangent(const Point& x, Rng& rng) const {
  PsdVector w{random_normal(n_, p_, rng), random_normal(p_, p_, rng)};
  PsdVector v = project_horizontal(x, w);
  return (1.0 / std::sqrt(inner(x, v, v))) * v;
}

PsdVector PsdFixedRank::random_ambient(const Point&, Rng& rng) const {
  PsdVector w{random_normal(n_, p_, rng), random_normal(p_, p_, rng)};
  return (1.0 / std::sqrt(trr_inner(w, w))) * w;
}

PsdVector PsdFixedRank::zero_vector(const Point&) const {
  return {Matrix::Zero(n_, p_), Matrix::Zero(p_, p_)};
}

PsdVector PsdFixedRank::vertical(const Point& x, const Matrix& q) const {
  const Matrix& p = x.p().p();
  return {x.y() * q, p * q - q * p};
}

double PsdFixedRank::horizontality_residual(const Point& x, const PsdVector& v) const {
  const Matrix& pinv = x.p().inverse();
  return (metric_.alpha1 * (x.y().transpose() * v.y) + metric_.beta * (v.p * pinv - pinv * v.p))
      .norm();
}

namespace {

struct ThreeBlock {
  Matrix tangent;      // Y^T w_Y + w_Y^T Y
  Matrix symmetry;     // w_P - w_P^T
  Matrix horizontal;   // asym(alpha1 Y^T w_Y + beta (w_P P^{-1} - P^{-1} w_P))
};

ThreeBlock three_block_constraint(const Matrix& y, const Matrix& pinv, double alpha1, double beta,
                                  const Matrix& wy, const Matrix& wp) {
  const Matrix ytw = y.transpose() * wy;
  return {ytw + ytw.transpose(), wp - wp.transpose(),
          asym(alpha1 * ytw + beta * (wp * pinv - pinv * wp))};
}

}  // namespace

double PsdFixedRank::constraint_residual(const Point& x, const PsdVector& v) const {
  const ThreeBlock j =
      three_block_constraint(x.y(), x.p().inverse(), metric_.alpha1, metric_.beta, v.y, v.p);
  return std::sqrt(j.tangent.squaredNorm() + j.symmetry.squaredNorm() +
                   j.horizontal.squaredNorm());
}

double PsdFixedRank::point_residual(const Point& x) const {
  return frame_residual(x.y()) + (x.p().p() - x.p().p().transpose()).norm();
}

framework::AmbientStructure PsdFixedRank::structure(const Point& x,
                                                    StructureOptions options) const {
  const Matrix y = x.y();
  const Matrix p = x.p().p();
  const Matrix pinv = x.p().inverse();
  const double a0 = metric_.alpha0;
  const double a1 = metric_.alpha1;
  const double beta = metric_.beta;
  const PsdFixedRank self = *this;

  const auto pack = [](PsdVector v) { return AmbientVector{std::move(v.y), std::move(v.p)}; };
  const auto unpack = [](const AmbientVector& a) { return PsdVector{a.block(0), a.block(1)}; };

  framework::AmbientStructure s;
  s.metric = [=](const AmbientVector& w) { return pack(self.metric_apply(x, unpack(w))); };
  s.metric_inverse = [=](const AmbientVector& w) {
    return pack(self.metric_inverse(x, unpack(w)));
  };
  s.d_metric = [=](const AmbientVector& xi, const AmbientVector& w) {
    return pack(self.d_metric(x, unpack(xi), unpack(w)));
  };
  s.cross_term = [=](const AmbientVector& xi, const AmbientVector& eta) {
    const Matrix& ey = xi.block(0);
    const Matrix& hy = eta.block(0);
    const Matrix a = pinv * eta.block(1) * pinv;
    const Matrix b = pinv * xi.block(1) * pinv;
    return AmbientVector{Matrix((a1 - a0) * (ey * (hy.transpose() * y) + hy * (ey.transpose() * y))),
                         Matrix(-beta * (a * xi.block(1) * pinv + b * eta.block(1) * pinv))};
  };

  s.constraint = [=](const AmbientVector& w) {
    ThreeBlock j = three_block_constraint(y, pinv, a1, beta, w.block(0), w.block(1));
    return AmbientVector{std::move(j.tangent), std::move(j.symmetry), std::move(j.horizontal)};
  };
  s.constraint_adjoint = [=](const AmbientVector& a) {
    const Matrix& a1m = a.block(0);
    const Matrix& a2m = a.block(1);
    const Matrix b3 = asym(a.block(2));
    return AmbientVector{Matrix(y * (a1m + a1m.transpose()) + a1 * (y * b3)),
                         Matrix(a2m - a2m.transpose() + beta * (b3 * pinv - pinv * b3))};
  };
  s.d_constraint = [=](const AmbientVector& xi, const AmbientVector& w) {
    const Matrix m = xi.block(0).transpose() * w.block(0);
    const Matrix q = pinv * xi.block(1) * pinv;
    const Matrix& wp = w.block(1);
    return AmbientVector{Matrix(m + m.transpose()), Matrix::Zero(p.rows(), p.cols()),
                         asym(a1 * m + beta * (q * wp - wp * q))};
  };
  s.d_constraint_adjoint = [=](const AmbientVector& xi, const AmbientVector& a) {
    const Matrix& a1m = a.block(0);
    const Matrix b3 = asym(a.block(2));
    const Matrix q = pinv * xi.block(1) * pinv;
    return AmbientVector{Matrix(xi.block(0) * (a1m + a1m.transpose()) + a1 * (xi.block(0) * b3)),
                         Matrix(beta * (q * b3 - b3 * q))};
  };
  s.constraint_dim = p_ * (p_ + 1) / 2 + p_ * (p_ - 1);

  const Matrix y_perp = orthogonal_complement(y);
  s.range_map = [=](const AmbientVector& b) {
    const Matrix& d = b.block(1);
    return AmbientVector{Matrix(beta * (y * (pinv * d - d * pinv)) + y_perp * b.block(0)),
                         Matrix(a1 * d)};
  };
  s.range_adjoint = [=](const AmbientVector& w) {
    const Matrix ytw = y.transpose() * w.block(0);
    return AmbientVector{Matrix(y_perp.transpose() * w.block(0)),
                         sym(a1 * w.block(1) + beta * (pinv * ytw) - beta * (ytw * pinv))};
  };
  s.range_dim = (n_ - p_) * p_ + p_ * (p_ + 1) / 2;

  if (options.closed_d_projection) {
    s.d_projection = [=](const AmbientVector& xi, const AmbientVector& w) {
      return pack(self.d_projection(x, unpack(xi), unpack(w)));
    };
  }
  return s;
}

double PsdFixedRank::typical_distance() const {
  return std::sqrt(static_cast<double>(p_) * (metric_.alpha1 + metric_.beta));
}

}  // namespace riemhess
