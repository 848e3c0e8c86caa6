#include "riemhess/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "riemhess/errors.hpp"

namespace riemhess {

void require_same_shape(const Matrix& a, const Matrix& b, const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(where) + ": shape mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}

void require_square(const Matrix& a, const char* where) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(where) + ": expected a square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

double trr_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "trr_inner");
  return a.cwiseProduct(b).sum();
}

Matrix sym(const Matrix& a) {
  require_square(a, "sym");
  return 0.5 * (a + a.transpose());
}

Matrix asym(const Matrix& a) {
  require_square(a, "asym");
  return 0.5 * (a - a.transpose());
}

BlockPartition::BlockPartition(std::vector<int> sizes, int total)
    : sizes_(std::move(sizes)), total_(total) {
  if (total_ <= 0) throw ParameterError("BlockPartition: total dimension must be positive");
  int sum = 0;
  for (int s : sizes_) {
    if (s <= 0) throw ParameterError("BlockPartition: block sizes must be positive");
    sum += s;
  }
  if (sum > total_) {
    throw ParameterError("BlockPartition: block sizes sum to " + std::to_string(sum) +
                         " > d = " + std::to_string(total_));
  }
  tail_ = total_ - sum;
}

std::vector<int> BlockPartition::all_sizes() const {
  std::vector<int> out = sizes_;
  out.push_back(tail_);
  return out;
}

std::vector<int> BlockPartition::offsets() const {
  std::vector<int> out;
  out.reserve(sizes_.size() + 1);
  int off = 0;
  for (int s : all_sizes()) {
    out.push_back(off);
    off += s;
  }
  return out;
}

Matrix symf(const Matrix& a, const BlockPartition& part) {
  require_square(a, "symf");
  if (a.rows() != part.total()) {
    throw DimensionError("symf: matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " but partition covers d = " +
                         std::to_string(part.total()));
  }
  // sym everywhere, then restore the first q diagonal blocks.
  Matrix out = 0.5 * (a + a.transpose());
  const auto offsets = part.offsets();
  for (int i = 0; i < part.num_blocks(); ++i) {
    const int off = offsets[i];
    const int sz = part.sizes()[i];
    out.block(off, off, sz, sz) = a.block(off, off, sz, sz);
  }
  return out;
}

SymmetricEigen eigh(const Matrix& a) {
  require_square(a, "eigh");
  if (!a.allFinite()) throw NumericalError("eigh: non-finite entries");
  const double scale = std::max(1.0, a.norm());
  const double asymmetry = (a - a.transpose()).norm();
  if (asymmetry > 1e-10 * scale) {
    throw InvariantError("eigh: input is not symmetric (|a - a^T| = " + std::to_string(asymmetry) +
                         ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.transpose()));
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: eigensolver failed");
  // Eigen returns ascending order.
  SymmetricEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

QrFactors qr_positive(const Matrix& a) {
  const auto n = a.rows();
  const auto d = a.cols();
  if (n < d) throw DimensionError("qr_positive: need rows >= cols");
  if (!a.allFinite()) throw NumericalError("qr_positive: non-finite entries");
  Eigen::HouseholderQR<Matrix> qr(a);
  QrFactors out;
  out.q = qr.householderQ() * Matrix::Identity(n, d);
  out.r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  const double tol = 1e-12 * std::max(1.0, a.norm());
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(out.r(i, i)) <= tol) {
      throw NumericalError("qr_positive: matrix is rank deficient (|R_ii| = " +
                           std::to_string(std::abs(out.r(i, i))) + ")");
    }
    if (out.r(i, i) < 0) {
      out.r.row(i) *= -1.0;
      out.q.col(i) *= -1.0;
    }
  }
  return out;
}

Matrix orthogonal_complement(const Matrix& y) {
  const auto n = y.rows();
  const auto p = y.cols();
  Eigen::HouseholderQR<Matrix> qr(y);
  Matrix full = qr.householderQ() * Matrix::Identity(n, n);
  return full.rightCols(n - p);
}

}  // namespace riemhess
