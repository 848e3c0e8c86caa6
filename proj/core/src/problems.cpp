#include "riemhess/problems.hpp"

#include <cmath>

#include "riemhess/errors.hpp"

namespace riemhess::problems {

Matrix random_spd_matrix(int n, Rng& rng) { return random_spd(n, 1.0, 10.0, rng); }

Eigen::VectorXd random_weights(int n, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.5, 1.5);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = uniform(rng);
  return w;
}

Eigen::VectorXd flag_lambda(const BlockPartition& part, double tail_value) {
  Eigen::VectorXd lambda(part.total());
  const std::vector<int> offsets = part.offsets();
  const int q = part.num_blocks();
  for (int i = 0; i < q; ++i) {
    lambda.segment(offsets[i], part.sizes()[i]).setConstant(static_cast<double>(q - i));
  }
  lambda.tail(part.tail()).setConstant(tail_value);
  return lambda;
}

AmbientProblem<Matrix> flag_quadratic(Matrix a, Eigen::VectorXd lambda) {
  require_square(a, "flag_quadratic");
  if ((a - a.transpose()).norm() > 1e-12 * std::max(1.0, a.norm())) {
    throw ParameterError("flag_quadratic: A must be symmetric");
  }
  AmbientProblem<Matrix> p;
  p.cost = [a, lambda](const Matrix& y) {
    const Matrix m = y.transpose() * a * y;
    const Matrix lm = lambda.asDiagonal() * m;
    return (lm * lm).trace();
  };
  p.egrad = [a, lambda](const Matrix& y) {
    const Matrix c = a * y * lambda.asDiagonal();
    return Matrix(4.0 * c * (y.transpose() * c));
  };
  p.ehess = [a, lambda](const Matrix& y, const Matrix& xi) {
    const Matrix c = a * y * lambda.asDiagonal();
    const Matrix c_dot = a * xi * lambda.asDiagonal();
    return Matrix(4.0 * (c_dot * (y.transpose() * c) + c * (xi.transpose() * c) +
                         c * (y.transpose() * c_dot)));
  };
  return p;
}

AmbientProblem<Matrix> rayleigh(Matrix a) {
  require_square(a, "rayleigh");
  AmbientProblem<Matrix> p;
  p.cost = [a](const Matrix& y) { return (y.transpose() * a * y).trace(); };
  p.egrad = [a](const Matrix& y) { return Matrix(2.0 * a * y); };
  p.ehess = [a](const Matrix&, const Matrix& xi) { return Matrix(2.0 * a * xi); };
  return p;
}

AmbientProblem<Matrix> linear(Matrix c) {
  AmbientProblem<Matrix> p;
  p.cost = [c](const Matrix& x) { return trr_inner(c, x); };
  p.egrad = [c](const Matrix&) { return c; };
  p.ehess = [c](const Matrix&, const Matrix&) { return Matrix(Matrix::Zero(c.rows(), c.cols())); };
  return p;
}

AmbientProblem<PsdVector> weighted_pca(Matrix a, Eigen::VectorXd w) {
  require_square(a, "weighted_pca");
  if (w.size() != a.rows()) throw DimensionError("weighted_pca: weight length must equal n");
  if (!(w.minCoeff() > 0.0)) throw ParameterError("weighted_pca: weights must be positive");
  const Matrix wa = w.asDiagonal() * a;
  const Matrix aw_wa = wa + wa.transpose();  // A W + W A
  const double trace_wa2 = (w.asDiagonal() * (a * a)).trace();

  AmbientProblem<PsdVector> p;
  p.cost = [=](const PsdVector& x) {
    const Matrix& y = x.y;
    const Matrix wy = w.asDiagonal() * y;
    const Matrix ytwy = y.transpose() * wy;
    const Matrix ytaw_way = y.transpose() * aw_wa * y;
    return trace_wa2 - (ytaw_way * x.p).trace() + (ytwy * x.p * x.p).trace();
  };
  p.egrad = [=](const PsdVector& x) {
    const Matrix& y = x.y;
    const Matrix& pm = x.p;
    const Matrix p2 = pm * pm;
    const Matrix wy = w.asDiagonal() * y;
    const Matrix ytwy = y.transpose() * wy;
    const Matrix gy = -(aw_wa * y) * (pm + pm.transpose()) + wy * (p2 + p2.transpose());
    const Matrix gp = -(y.transpose() * aw_wa * y) + ytwy * pm.transpose() + pm.transpose() * ytwy;
    return PsdVector{gy, gp};
  };
  p.ehess = [=](const PsdVector& x, const PsdVector& xi) {
    const Matrix& y = x.y;
    const Matrix& pm = x.p;
    const Matrix p2 = pm * pm;
    const Matrix dp2 = xi.p * pm + pm * xi.p;
    const Matrix wy = w.asDiagonal() * y;
    const Matrix wxi = w.asDiagonal() * xi.y;
    const Matrix hy = -(aw_wa * xi.y) * (pm + pm.transpose()) -
                      (aw_wa * y) * (xi.p + xi.p.transpose()) + wxi * (p2 + p2.transpose()) +
                      wy * (dp2 + dp2.transpose());
    const Matrix ytwy = y.transpose() * wy;
    const Matrix ytwy_dot = xi.y.transpose() * wy + y.transpose() * wxi;
    const Matrix aw_term = xi.y.transpose() * aw_wa * y;
    const Matrix hp = -(aw_term + aw_term.transpose()) + ytwy_dot * pm.transpose() +
                      pm.transpose() * ytwy_dot + ytwy * xi.p.transpose() +
                      xi.p.transpose() * ytwy;
    return PsdVector{hy, hp};
  };
  return p;
}

AmbientProblem<Matrix> spd_logdet(Matrix a) {
  require_square(a, "spd_logdet");
  AmbientProblem<Matrix> p;
  p.cost = [a](const Matrix& x) {
    const Eigen::PartialPivLU<Matrix> lu(x);
    double logabsdet = 0.0;
    const Matrix& lu_m = lu.matrixLU();
    for (int i = 0; i < lu_m.rows(); ++i) logabsdet += std::log(std::abs(lu_m(i, i)));
    return trr_inner(a, x) - logabsdet;
  };
  p.egrad = [a](const Matrix& x) { return Matrix(a - x.inverse().transpose()); };
  p.ehess = [](const Matrix& x, const Matrix& xi) {
    const Matrix inv_t = x.inverse().transpose();
    return Matrix(inv_t * xi.transpose() * inv_t);
  };
  return p;
}

AmbientProblem<Matrix> spd_trace_inverse(int n) {
  AmbientProblem<Matrix> p;
  p.cost = [](const Matrix& x) { return x.trace() + x.inverse().trace(); };
  p.egrad = [n](const Matrix& x) {
    const Matrix inv_t = x.inverse().transpose();
    return Matrix(Matrix::Identity(n, n) - inv_t * inv_t);
  };
  p.ehess = [](const Matrix& x, const Matrix& xi) {
    // d(X^{-T} X^{-T}) = -X^{-T} xi^T X^{-T} X^{-T} - X^{-T} X^{-T} xi^T X^{-T}
    const Matrix inv_t = x.inverse().transpose();
    return Matrix(inv_t * xi.transpose() * inv_t * inv_t + inv_t * inv_t * xi.transpose() * inv_t);
  };
  return p;
}

}  // namespace riemhess::problems
