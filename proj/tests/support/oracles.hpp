#pragma once

// Independent reference computations for the unit tests. Everything here is
// deliberately naive: dense matrices built column by column from callbacks,
// explicit loops, and direct factorizations.

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "riemhess/ambient.hpp"
#include "riemhess/numerics.hpp"

namespace oracle {

using riemhess::AmbientVector;
using riemhess::Matrix;

/// Entrywise sum of a_ij b_ij.
inline double entrywise_inner(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
  return s;
}

/// symf from its block description: diagonal blocks 1..q copied, all other
/// blocks (i, j) set to (A_ij + A_ji^T) / 2.
inline Matrix blockwise_symf(const Matrix& a, const std::vector<int>& sizes) {
  const int d = static_cast<int>(a.rows());
  std::vector<int> all = sizes;
  int used = 0;
  for (int s : sizes) used += s;
  all.push_back(d - used);
  std::vector<int> off(all.size(), 0);
  for (size_t i = 1; i < all.size(); ++i) off[i] = off[i - 1] + all[i - 1];
  const size_t q = sizes.size();
  Matrix out(d, d);
  for (size_t i = 0; i < all.size(); ++i) {
    for (size_t j = 0; j < all.size(); ++j) {
      const auto aij = a.block(off[i], off[j], all[i], all[j]);
      const auto aji = a.block(off[j], off[i], all[j], all[i]);
      if (i == j && i < q) {
        out.block(off[i], off[j], all[i], all[j]) = aij;
      } else {
        out.block(off[i], off[j], all[i], all[j]) = 0.5 * (aij + aji.transpose());
      }
    }
  }
  return out;
}

/// Flattens an ambient vector into one column (blocks in order, column-major).
inline Eigen::VectorXd flatten(const AmbientVector& v) {
  int n = 0;
  for (const Matrix& b : v.blocks()) n += static_cast<int>(b.size());
  Eigen::VectorXd out(n);
  int k = 0;
  for (const Matrix& b : v.blocks()) {
    out.segment(k, b.size()) = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
    k += static_cast<int>(b.size());
  }
  return out;
}

inline AmbientVector unflatten(const Eigen::VectorXd& x, const AmbientVector& like) {
  AmbientVector out = like.zeros_like();
  int k = 0;
  for (int i = 0; i < out.num_blocks(); ++i) {
    Matrix& b = out.block(i);
    b = Eigen::Map<const Matrix>(x.data() + k, b.rows(), b.cols());
    k += static_cast<int>(b.size());
  }
  return out;
}

/// Dense matrix of a linear map, built by applying it to unit vectors.
inline Matrix dense_matrix(const std::function<AmbientVector(const AmbientVector&)>& f,
                           const AmbientVector& domain_like) {
  const int n = static_cast<int>(flatten(domain_like).size());
  Matrix out;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(j) = 1.0;
    const Eigen::VectorXd col = flatten(f(unflatten(e, domain_like)));
    if (j == 0) out.resize(col.size(), n);
    out.col(j) = col;
  }
  return out;
}

/// Orthonormal basis of the nullspace of a dense matrix (full SVD).
inline Matrix null_basis(const Matrix& j, double tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(j, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * std::max(1.0, sv(0))) ++rank;
  return svd.matrixV().rightCols(j.cols() - rank);
}

/// g-orthogonal projection onto span(B): B (B^T G B)^{-1} B^T G w.
inline Eigen::VectorXd g_least_squares(const Matrix& basis, const Matrix& g,
                                       const Eigen::VectorXd& w) {
  const Matrix gram = basis.transpose() * g * basis;
  return basis * gram.ldlt().solve(basis.transpose() * g * w);
}

/// Solution of sum_k c_k P^{s_k} X P^{t_k} = B through the p^2 x p^2
/// vectorized system, vec(P^s X P^t) = (P^t^T kron P^s) vec(X).
struct Term {
  int s;
  int t;
  double c;
};

inline Matrix int_power(const Matrix& p, int k) {
  const Matrix base = k >= 0 ? p : Matrix(p.inverse());
  Matrix out = Matrix::Identity(p.rows(), p.cols());
  for (int i = 0; i < std::abs(k); ++i) out = out * base;
  return out;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix vectorized_lyapunov_solve(const Matrix& p, const std::vector<Term>& terms,
                                        const Matrix& b) {
  const int n = static_cast<int>(p.rows());
  Matrix big = Matrix::Zero(n * n, n * n);
  for (const Term& t : terms) big += t.c * kron(int_power(p, t.t).transpose(), int_power(p, t.s));
  const Eigen::VectorXd vb = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  const Eigen::VectorXd vx = big.fullPivLu().solve(vb);
  return Eigen::Map<const Matrix>(vx.data(), n, n);
}

/// Best rank-p approximation of a symmetric matrix by its top-p eigenpairs
/// (largest eigenvalues), computed with Eigen's solver directly.
inline Matrix top_eigen_reconstruction(const Matrix& a, int p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Matrix u = es.eigenvectors().rightCols(p);
  const Eigen::VectorXd l = es.eigenvalues().tail(p);
  return u * l.asDiagonal() * u.transpose();
}

/// Central-difference derivative of a scalar function at 0.
inline double central_difference(const std::function<double(double)>& f, double h) {
  return (f(h) - f(-h)) / (2.0 * h);
}

}  // namespace oracle
