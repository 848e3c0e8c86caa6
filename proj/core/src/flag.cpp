#include "riemhess/flag.hpp"

#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "riemhess/errors.hpp"

namespace riemhess {

Flag::Flag(int n, BlockPartition partition, StiefelMetric metric)
    : n_(n), partition_(std::move(partition)), metric_(metric),
      stiefel_(n, partition_.total(), metric) {}

Flag::Flag(int n, int d, std::vector<int> blocks, StiefelMetric metric)
    : Flag(n, BlockPartition(std::move(blocks), d), metric) {}

std::string Flag::name() const {
  return fmt::format("flag(n={},d={},blocks=[{}],alpha0={},alpha1={})", n_, d(),
                     fmt::join(partition_.sizes(), ","), metric_.alpha0, metric_.alpha1);
}

double Flag::inner(const Point& x, const Matrix& a, const Matrix& b) const {
  return stiefel_.inner(x, a, b);
}

Matrix Flag::metric_apply(const Point& x, const Matrix& w) const {
  return stiefel_.metric_apply(x, w);
}

Matrix Flag::metric_inverse(const Point& x, const Matrix& w) const {
  return stiefel_.metric_inverse(x, w);
}

Matrix Flag::project_horizontal(const Point& x, const Matrix& w) const {
  require_same_shape(x.y(), w, "Flag::project_horizontal");
  const Matrix& y = x.y();
  return w - y * symf(y.transpose() * w, partition_);
}

Matrix Flag::rgrad(const Point& x, const Matrix& egrad) const {
  require_same_shape(x.y(), egrad, "Flag::rgrad");
  const Matrix& y = x.y();
  const double a0 = metric_.alpha0;
  const double a1 = metric_.alpha1;
  const Matrix ytg = y.transpose() * egrad;
  return egrad / a0 + (1.0 / a1 - 1.0 / a0) * (y * ytg) - (y * symf(ytg, partition_)) / a1;
}

Matrix Flag::gamma_horizontal(const Point& x, const Matrix& xi, const Matrix& eta) const {
  const Matrix& y = x.y();
  Matrix out = y * symf(xi.transpose() * eta, partition_);
  const double c = (metric_.alpha0 - metric_.alpha1) / metric_.alpha0;
  if (c != 0.0) {
    Matrix cross = xi * (eta.transpose() * y) + eta * (xi.transpose() * y);
    cross -= y * (y.transpose() * cross);
    out += c * cross;
  }
  return out;
}

Matrix Flag::rhess11(const Point& x, const Matrix& egrad, const Matrix& ehess_vec,
                     const Matrix& xi) const {
  const Matrix& y = x.y();
  const Matrix ytg = y.transpose() * egrad;
  Matrix inner = ehess_vec - xi * symf(ytg, partition_);
  const double c = (metric_.alpha0 - metric_.alpha1) / metric_.alpha0;
  if (c != 0.0) {
    const Matrix pi0_g = egrad - y * ytg;
    const Matrix pi0_xi = xi - y * (y.transpose() * xi);
    inner -= c * (pi0_g * (y.transpose() * xi) + y * (egrad.transpose() * pi0_xi));
  }
  return rgrad(x, inner);
}

double Flag::rhess02(const Point& x, const Matrix& egrad, double ehess_bilinear, const Matrix& xi,
                     const Matrix& eta) const {
  return ehess_bilinear - trr_inner(gamma_horizontal(x, xi, eta), egrad);
}

StiefelPoint Flag::retract(const Point& x, const Matrix& eta) const {
  return stiefel_.retract(x, eta);
}

StiefelPoint Flag::random_point(Rng& rng) const { return stiefel_.random_point(rng); }

Matrix Flag::random_tangent(const Point& x, Rng& rng) const {
  Matrix v = project_horizontal(x, random_normal(n_, d(), rng));
  return v / std::sqrt(inner(x, v, v));
}

Matrix Flag::random_ambient(const Point& x, Rng& rng) const {
  return stiefel_.random_ambient(x, rng);
}

double Flag::constraint_residual(const Point& x, const Matrix& v) const {
  return symf(x.y().transpose() * v, partition_).norm();
}

int Flag::symf_dim() const {
  const std::vector<int> sizes = partition_.all_sizes();
  const int q = partition_.num_blocks();
  int dim = 0;
  for (int i = 0; i < static_cast<int>(sizes.size()); ++i) {
    dim += i < q ? sizes[i] * sizes[i] : sizes[i] * (sizes[i] + 1) / 2;
    for (int j = i + 1; j < static_cast<int>(sizes.size()); ++j) dim += sizes[i] * sizes[j];
  }
  return dim;
}

framework::AmbientStructure Flag::structure(const Point& x, StructureOptions options) const {
  // Metric pieces are shared with Stiefel; only J changes.
  framework::AmbientStructure s = stiefel_.structure(x, StructureOptions{false, false});
  const Matrix y = x.y();
  const BlockPartition part = partition_;
  const double a1 = metric_.alpha1;
  s.constraint = [y, part](const AmbientVector& w) {
    return AmbientVector(symf(y.transpose() * w.block(0), part));
  };
  s.constraint_adjoint = [y, part](const AmbientVector& a) {
    return AmbientVector(Matrix(y * symf(a.block(0), part)));
  };
  s.d_constraint = [part](const AmbientVector& xi, const AmbientVector& w) {
    return AmbientVector(symf(xi.block(0).transpose() * w.block(0), part));
  };
  s.d_constraint_adjoint = [part](const AmbientVector& xi, const AmbientVector& a) {
    return AmbientVector(Matrix(xi.block(0) * symf(a.block(0), part)));
  };
  s.constraint_gram_solver = nullptr;
  if (options.closed_gram_solver) {
    // J g^{-1} J^t a = symf(a) / alpha1, the identity over alpha1 on the range of symf.
    s.constraint_gram_solver = [a1](const AmbientVector& a) { return a1 * a; };
  }
  s.constraint_dim = symf_dim();
  return s;
}

double Flag::typical_distance() const { return std::sqrt(static_cast<double>(d())); }

}  // namespace riemhess
