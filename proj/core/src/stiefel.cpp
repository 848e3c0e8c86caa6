#include "riemhess/stiefel.hpp"

#include <cmath>

#include <fmt/format.h>

#include "riemhess/errors.hpp"

namespace riemhess {

double frame_residual(const Matrix& y) {
  return (y.transpose() * y - Matrix::Identity(y.cols(), y.cols())).norm();
}

StiefelPoint::StiefelPoint(Matrix y) : y_(std::move(y)) {
  if (y_.cols() == 0 || y_.rows() < y_.cols()) {
    throw DimensionError(fmt::format("StiefelPoint: need n >= d >= 1, got {}x{}", y_.rows(),
                                     y_.cols()));
  }
  if (!y_.allFinite()) throw InvariantError("StiefelPoint: non-finite entries");
  const double res = frame_residual(y_);
  if (res > 1e-10) {
    throw InvariantError(fmt::format("StiefelPoint: |Y^T Y - I| = {:.3e} exceeds 1e-10", res));
  }
}

Stiefel::Stiefel(int n, int d, StiefelMetric metric) : n_(n), d_(d), metric_(metric) {
  if (d < 1 || n < d) throw DimensionError(fmt::format("Stiefel: need n >= d >= 1, got n={} d={}", n, d));
  if (!(metric.alpha0 > 0.0) || !(metric.alpha1 > 0.0)) {
    throw ParameterError(fmt::format("Stiefel: metric parameters must be positive, got ({}, {})",
                                     metric.alpha0, metric.alpha1));
  }
}

std::string Stiefel::name() const {
  return fmt::format("stiefel(n={},d={},alpha0={},alpha1={})", n_, d_, metric_.alpha0,
                     metric_.alpha1);
}

double Stiefel::inner(const Point& x, const Matrix& a, const Matrix& b) const {
  return trr_inner(a, metric_apply(x, b));
}

Matrix Stiefel::metric_apply(const Point& x, const Matrix& w) const {
  const Matrix& y = x.y();
  return metric_.alpha0 * w + (metric_.alpha1 - metric_.alpha0) * (y * (y.transpose() * w));
}

Matrix Stiefel::metric_inverse(const Point& x, const Matrix& w) const {
  const Matrix& y = x.y();
  return w / metric_.alpha0 +
         (1.0 / metric_.alpha1 - 1.0 / metric_.alpha0) * (y * (y.transpose() * w));
}

Matrix Stiefel::project(const Point& x, const Matrix& w) const {
  require_same_shape(x.y(), w, "Stiefel::project");
  const Matrix& y = x.y();
  return w - y * sym(y.transpose() * w);
}

Matrix Stiefel::rgrad(const Point& x, const Matrix& egrad) const {
  require_same_shape(x.y(), egrad, "Stiefel::rgrad");
  const Matrix& y = x.y();
  const Matrix ytg = y.transpose() * egrad;
  return (egrad - y * ytg) / metric_.alpha0 + (y * asym(ytg)) / metric_.alpha1;
}

Matrix Stiefel::christoffel_K(const Point& x, const Matrix& xi, const Matrix& eta) const {
  const Matrix& y = x.y();
  const Matrix ytxi = y.transpose() * xi;
  const Matrix yteta = y.transpose() * eta;
  // (D_xi g) eta + (D_eta g) xi minus the cross term, each scaled by alpha1 - alpha0.
  const Matrix sum = xi * yteta + eta * ytxi + y * (xi.transpose() * eta + eta.transpose() * xi);
  const Matrix cross = xi * yteta.transpose() + eta * ytxi.transpose();
  return 0.5 * (metric_.alpha1 - metric_.alpha0) * (sum - cross);
}

Matrix Stiefel::gamma(const Point& x, const Matrix& xi, const Matrix& eta) const {
  const Matrix& y = x.y();
  Matrix out = y * sym(xi.transpose() * eta);
  const double c = (metric_.alpha0 - metric_.alpha1) / metric_.alpha0;
  if (c != 0.0) {
    Matrix cross = xi * (eta.transpose() * y) + eta * (xi.transpose() * y);
    cross -= y * (y.transpose() * cross);
    out += c * cross;
  }
  return out;
}

Matrix Stiefel::rhess11(const Point& x, const Matrix& egrad, const Matrix& ehess_vec,
                        const Matrix& xi) const {
  const Matrix& y = x.y();
  const Matrix ytg = y.transpose() * egrad;
  Matrix inner = ehess_vec - xi * sym(ytg);
  const double c = (metric_.alpha0 - metric_.alpha1) / metric_.alpha0;
  if (c != 0.0) {
    const Matrix pi0_g = egrad - y * ytg;
    const Matrix pi0_xi = xi - y * (y.transpose() * xi);
    inner -= c * (pi0_g * (y.transpose() * xi) + y * (egrad.transpose() * pi0_xi));
  }
  return rgrad(x, inner);
}

double Stiefel::rhess02(const Point& x, const Matrix&  egrad, double ehess_bilinear,
                        const Matrix& xi, const Matrix& eta) const {
  return ehess_bilinear - trr_inner(gamma(x, xi, eta), egrad);
}

StiefelPoint Stiefel::retract(const Point& x, const Matrix& eta) const {
  require_same_shape(x.y(), eta, "Stiefel::retract");
  return StiefelPoint(qr_positive(x.y() + eta).q);
}

StiefelPoint Stiefel::random_point(Rng& rng) const {
  return StiefelPoint(random_orthonormal(n_, d_, rng));
}

Matrix Stiefel::random_tangent(const Point& x, Rng& rng) const {
  Matrix v = project(x, random_normal(n_, d_, rng));
  return v / std::sqrt(inner(x, v, v));
}

Matrix Stiefel::random_ambient(const Point&, Rng& rng) const { return random_unit(n_, d_, rng); }

Matrix Stiefel::zero_vector(const Point&) const { return Matrix::Zero(n_, d_); }

double Stiefel::constraint_residual(const Point& x, const Matrix& v) const {
  const Matrix ytv = x.y().transpose() * v;
  return (ytv + ytv.transpose()).norm();
}

framework::AmbientStructure Stiefel::structure(const Point& x, StructureOptions options) const {
  const Matrix y = x.y();
  const double a0 = metric_.alpha0;
  const double a1 = metric_.alpha1;
  framework::AmbientStructure s;
  s.metric = [self = *this, x](const AmbientVector& w) {
    return AmbientVector(self.metric_apply(x, w.block(0)));
  };
  s.metric_inverse = [self = *this, x](const AmbientVector& w) {
    return AmbientVector(self.metric_inverse(x, w.block(0)));
  };
  s.constraint = [y](const AmbientVector& w) {
    const Matrix ytw = y.transpose() * w.block(0);
    return AmbientVector(Matrix(ytw + ytw.transpose()));
  };
  // Exact adjoint on all d x d matrices: <Y^T w + w^T Y, a> = <w, Y (a + a^T)>.
  s.constraint_adjoint = [y](const AmbientVector& a) {
    return AmbientVector(Matrix(y * (a.block(0) + a.block(0).transpose())));
  };
  s.d_constraint = [](const AmbientVector& xi, const AmbientVector& w) {
    const Matrix m = xi.block(0).transpose() * w.block(0);
    return AmbientVector(Matrix(m + m.transpose()));
  };
  s.d_constraint_adjoint = [](const AmbientVector& xi, const AmbientVector& a) {
    return AmbientVector(Matrix(xi.block(0) * (a.block(0) + a.block(0).transpose())));
  };
  if (options.closed_gram_solver) {
    // J g^{-1} J^t a = (4 / alpha1) a on symmetric a.
    s.constraint_gram_solver = [a1](const AmbientVector& a) { return (a1 / 4.0) * a; };
  }
  s.constraint_dim = d_ * (d_ + 1) / 2;
  if (a1 != a0) {
    s.d_metric = [y, a0, a1](const AmbientVector& xi, const AmbientVector& w) {
      const Matrix& e = xi.block(0);
      const Matrix& o = w.block(0);
      return AmbientVector(Matrix((a1 - a0) * (e * (y.transpose() * o) + y * (e.transpose() * o))));
    };
    s.cross_term = [y, a0, a1](const AmbientVector& xi, const AmbientVector& eta) {
      const Matrix& e = xi.block(0);
      const Matrix& h = eta.block(0);
      return AmbientVector(Matrix((a1 - a0) * (e * (h.transpose() * y) + h * (e.transpose() * y))));
    };
  }
  return s;
}

double Stiefel::typical_distance() const { return std::sqrt(static_cast<double>(d_)); }

// Sphere

Sphere::Sphere(int n) : n_(n) {
  if (n < 2) throw DimensionError(fmt::format("Sphere: need n >= 2, got {}", n));
}

std::string Sphere::name() const { return fmt::format("sphere(n={})", n_); }

Matrix Sphere::project(const Point& x, const Matrix& w) const {
  require_same_shape(x.y(), w, "Sphere::project");
  return w - x.y() * (x.y().transpose() * w);
}

Matrix Sphere::gamma(const Point& x, const Matrix& xi, const Matrix& eta) const {
  return x.y() * (xi.transpose() * eta);
}

Matrix Sphere::rhess11(const Point& x, const Matrix& egrad, const Matrix& ehess_vec,
                       const Matrix& xi) const {
  return project(x, ehess_vec - xi * (x.y().transpose() * egrad));
}

double Sphere::rhess02(const Point& x, const Matrix& egrad, double ehess_bilinear,
                       const Matrix& xi, const Matrix& eta) const {
  return ehess_bilinear - trr_inner(gamma(x, xi, eta), egrad);
}

StiefelPoint Sphere::retract(const Point& x, const Matrix& eta) const {
  Matrix v = x.y() + eta;
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("Sphere::retract: zero vector");
  return StiefelPoint(v / norm);
}

StiefelPoint Sphere::random_point(Rng& rng) const { return StiefelPoint(random_unit(n_, 1, rng)); }

Matrix Sphere::random_tangent(const Point& x, Rng& rng) const {
  Matrix v = project(x, random_normal(n_, 1, rng));
  return v / v.norm();
}

Matrix Sphere::random_ambient(const Point&, Rng& rng) const { return random_unit(n_, 1, rng); }

double Sphere::constraint_residual(const Point& x, const Matrix& v) const {
  return std::abs((x.y().transpose() * v)(0, 0));
}

framework::AmbientStructure Sphere::structure(const Point& x) const {
  const Matrix p = x.y();
  framework::AmbientStructure s;
  s.metric = [](const AmbientVector& w) { return w; };
  s.metric_inverse = [](const AmbientVector& w) { return w; };
  s.constraint = [p](const AmbientVector& w) { return AmbientVector(Matrix(p.transpose() * w.block(0))); };
  s.constraint_adjoint = [p](const AmbientVector& a) { return AmbientVector(Matrix(p * a.block(0))); };
  s.d_constraint = [](const AmbientVector& xi, const AmbientVector& w) {
    return AmbientVector(Matrix(xi.block(0).transpose() * w.block(0)));
  };
  s.d_constraint_adjoint = [](const AmbientVector& xi, const AmbientVector& a) {
    return AmbientVector(Matrix(xi.block(0) * a.block(0)));
  };
  s.constraint_dim = 1;
  return s;
}

}  // namespace riemhess
