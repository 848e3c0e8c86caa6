#include "riemhess/spd.hpp"

#include <cmath>

#include <fmt/format.h>

#include "riemhess/errors.hpp"

namespace riemhess {

SpdPoint::SpdPoint(Matrix p) : p_(std::move(p)) {
  require_square(p_, "SpdPoint");
  if (!p_.allFinite()) throw InvariantError("SpdPoint: non-finite entries");
  const double asym_norm = (p_ - p_.transpose()).norm();
  if (asym_norm > 1e-10 * std::max(1.0, p_.norm())) {
    throw InvariantError(fmt::format("SpdPoint: asymmetry {:.3e} exceeds tolerance", asym_norm));
  }
  p_ = 0.5 * (p_ + p_.transpose());
  eig_ = eigh(p_);
  const double lmax = eig_.values(0);
  const double lmin = eig_.values(eig_.values.size() - 1);
  if (!(lmin > 1e-12 * lmax)) {
    throw InvariantError(
        fmt::format("SpdPoint: not positive definite (eigenvalues in [{:.3e}, {:.3e}])", lmin, lmax));
  }
  cache_functions();
}

SpdPoint SpdPoint::from_eigen(SymmetricEigen eig) {
  const auto& v = eig.values;
  if (!v.allFinite() || !eig.vectors.allFinite()) {
    throw NumericalError("SpdPoint::from_eigen: non-finite eigendata");
  }
  if (!(v.minCoeff() > 0.0)) throw InvariantError("SpdPoint::from_eigen: nonpositive eigenvalue");
  SpdPoint out;
  out.eig_ = std::move(eig);
  out.p_ = sym(spectral_function(out.eig_, [](double x) { return x; }));
  out.cache_functions();
  return out;
}

void SpdPoint::cache_functions() {
  inv_ = spectral_function(eig_, [](double v) { return 1.0 / v; });
  sqrt_ = spectral_function(eig_, [](double v) { return std::sqrt(v); });
  inv_sqrt_ = spectral_function(eig_, [](double v) { return 1.0 / std::sqrt(v); });
}

SpdPoint spd_geodesic(const SpdPoint& x, const Matrix& xi, double t) {
  require_same_shape(x.p(), xi, "spd_geodesic");
  const SymmetricEigen exponent = eigh(t * sym(x.inv_sqrt() * xi * x.inv_sqrt()));
  const Eigen::VectorXd half = (0.5 * exponent.values).array().exp().matrix();
  const Matrix b = x.sqrt() * exponent.vectors * half.asDiagonal();
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU);
  SymmetricEigen eig;
  eig.values = svd.singularValues().array().square().matrix();
  eig.vectors = svd.matrixU();
  return SpdPoint::from_eigen(std::move(eig));
}

Spd::Spd(int n) : n_(n) {
  if (n < 1) throw DimensionError(fmt::format("Spd: need n >= 1, got {}", n));
}

std::string Spd::name() const { return fmt::format("spd(n={})", n_); }

double Spd::inner(const Point& x, const Matrix& a, const Matrix& b) const {
  return trr_inner(a, metric_apply(x, b));
}

Matrix Spd::metric_apply(const Point& x, const Matrix& w) const {
  return x.inverse() * w * x.inverse();
}

Matrix Spd::metric_inverse(const Point& x, const Matrix& w) const { return x.p() * w * x.p(); }

Matrix Spd::project(const Point& x, const Matrix& w) const {
  require_same_shape(x.p(), w, "Spd::project");
  return sym(w);
}

Matrix Spd::rgrad(const Point& x, const Matrix& egrad) const {
  require_same_shape(x.p(), egrad, "Spd::rgrad");
  return x.p() * sym(egrad) * x.p();
}

Matrix Spd::gamma(const Point& x, const Matrix& xi, const Matrix& eta) const {
  const Matrix m = xi * x.inverse() * eta;
  return -0.5 * (m + m.transpose());
}

Matrix Spd::rhess11(const Point& x, const Matrix& egrad, const Matrix& ehess_vec,
                    const Matrix& xi) const {
  return x.p() * sym(ehess_vec) * x.p() + sym(xi * sym(egrad) * x.p());
}

double Spd::rhess02(const Point& x, const Matrix& egrad, double ehess_bilinear, const Matrix& xi,
                    const Matrix& eta) const {
  return ehess_bilinear - trr_inner(gamma(x, xi, eta), egrad);
}

SpdPoint Spd::random_point(Rng& rng) const { return SpdPoint(random_spd(n_, 0.5, 2.0, rng)); }

Matrix Spd::random_tangent(const Point& x, Rng& rng) const {
  Matrix v = sym(random_normal(n_, n_, rng));
  return v / std::sqrt(inner(x, v, v));
}

Matrix Spd::random_ambient(const Point&, Rng& rng) const { return random_unit(n_, n_, rng); }

double Spd::constraint_residual(const Point&, const Matrix& v) const {
  return (v - v.transpose()).norm();
}

double Spd::point_residual(const Point& x) const {
  const double lmin = x.eig().values(n_ - 1);
  return (x.p() - x.p().transpose()).norm() + (lmin > 0.0 ? 0.0 : -lmin);
}

framework::AmbientStructure Spd::structure(const Point& x, StructureOptions options) const {
  const Matrix p = x.p();
  const Matrix pinv = x.inverse();
  framework::AmbientStructure s;
  s.metric = [pinv](const AmbientVector& w) { return AmbientVector(Matrix(pinv * w.block(0) * pinv)); };
  s.metric_inverse = [p](const AmbientVector& w) { return AmbientVector(Matrix(p * w.block(0) * p)); };
  s.constraint = [](const AmbientVector& w) {
    return AmbientVector(Matrix(w.block(0) - w.block(0).transpose()));
  };
  s.constraint_adjoint = [](const AmbientVector& a) {
    return AmbientVector(Matrix(a.block(0) - a.block(0).transpose()));
  };
  // J does not depend on the point.
  s.d_constraint = [](const AmbientVector&, const AmbientVector& w) { return w.zeros_like(); };
  s.d_constraint_adjoint = [](const AmbientVector&, const AmbientVector& a) {
    return a.zeros_like();
  };
  if (options.closed_gram_solver) {
    // J g^{-1} J^t a = 4 P a P on antisymmetric a.
    s.constraint_gram_solver = [pinv](const AmbientVector& a) {
      return AmbientVector(Matrix(0.25 * pinv * a.block(0) * pinv));
    };
  }
  s.constraint_dim = n_ * (n_ - 1) / 2;
  s.d_metric = [pinv](const AmbientVector& xi, const AmbientVector& w) {
    const Matrix a = pinv * xi.block(0) * pinv;
    const Matrix b = pinv * w.block(0) * pinv;
    return AmbientVector(Matrix(-(a * w.block(0) * pinv) - b * xi.block(0) * pinv));
  };
  s.cross_term = [pinv](const AmbientVector& xi, const AmbientVector& eta) {
    const Matrix a = pinv * eta.block(0) * pinv;
    const Matrix b = pinv * xi.block(0) * pinv;
    return AmbientVector(Matrix(-(a * xi.block(0) * pinv) - b * eta.block(0) * pinv));
  };
  if (options.closed_d_projection) {
    // Pi = sym does not depend on the point.
    s.d_projection = [](const AmbientVector&, const AmbientVector& w) { return w.zeros_like(); };
  }
  return s;
}

}  // namespace riemhess
