#pragma once

#include <Eigen/Dense>

#include <vector>

namespace riemhess {

/// Dense real matrix. The base field is fixed to the reals; the transpose
/// used throughout plays the role of the adjoint and would become the
/// Hermitian transpose in a complex build.
using Matrix = Eigen::MatrixXd;

/// Trace inner product Tr(a b^T).
double trr_inner(const Matrix& a, const Matrix& b);

/// Symmetric part (a + a^T) / 2 of a square matrix.
Matrix sym(const Matrix& a);

/// Antisymmetric part (a - a^T) / 2 of a square matrix.
Matrix asym(const Matrix& a);

/// Block sizes d_1..d_q of a d x d matrix; the remaining d - sum(d_i)
/// columns form a trailing block with no group action.
class BlockPartition {
 public:
  BlockPartition(std::vector<int> sizes, int total);

  const std::vector<int>& sizes() const { return sizes_; }
  int total() const { return total_; }
  int tail() const { return tail_; }
  int num_blocks() const { return static_cast<int>(sizes_.size()); }

  /// Offsets of all q + 1 blocks including the (possibly empty) tail.
  std::vector<int> offsets() const;
  /// Sizes of all q + 1 blocks including the tail.
  std::vector<int> all_sizes() const;

 private:
  std::vector<int> sizes_;
  int total_;
  int tail_;
};

/// Block symmetrizer: keeps the first q diagonal blocks, replaces every
/// off-diagonal block (i, j) by (A_ij + A_ji^T) / 2 and symmetrizes the tail
/// diagonal block.
Matrix symf(const Matrix& a, const BlockPartition& part);

struct SymmetricEigen {
  Eigen::VectorXd values;  // descending
  Matrix vectors;  // orthogonal, columns match `values`
};

/// Eigendecomposition of a (numerically) symmetric matrix. The input is
/// symmetrized first; asymmetry beyond 1e-10 * max(1, |a|) is rejected.
SymmetricEigen eigh(const Matrix& a);

struct QrFactors {
  Matrix q;  // n x d, orthonormal columns
  Matrix r;  // d x d upper triangular with positive diagonal
};

/// Thin QR with the sign convention diag(R) > 0.
QrFactors qr_positive(const Matrix& a);

/// Orthonormal basis of the orthogonal complement of the column span of y
/// (y must have orthonormal columns).
Matrix orthogonal_complement(const Matrix& y);

/// Apply a scalar function to the eigenvalues of a symmetric matrix.
template <class F>
Matrix spectral_function(const SymmetricEigen& eig, F&& f) {
  Eigen::VectorXd mapped = eig.values.unaryExpr(f);
  return eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
}

/// Throws DimensionError unless a and b have the same shape.
void require_same_shape(const Matrix& a, const Matrix& b, const char* where);
/// Throws DimensionError unless a is square.
void require_square(const Matrix& a, const char* where);

}  // namespace riemhess
