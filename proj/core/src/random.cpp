#include "riemhess/random.hpp"

#include <cmath>

namespace riemhess {

Matrix random_normal(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

Matrix random_unit(int rows, int cols, Rng& rng) {
  Matrix out = random_normal(rows, cols, rng);
  return out / out.norm();
}

Matrix random_symmetric_unit(int n, Rng& rng) {
  Matrix out = sym(random_normal(n, n, rng));
  return out / out.norm();
}

Matrix random_orthonormal(int n, int d, Rng& rng) {
  return qr_positive(random_normal(n, d, rng)).q;
}

Matrix random_spd(int n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> uniform(std::log(lo), std::log(hi));
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = std::exp(uniform(rng));
  const Matrix q = random_orthonormal(n, n, rng);
  Matrix out = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix random_block_orthogonal(const std::vector<int>& sizes, int tail, Rng& rng) {
  int d = tail;
  for (int s : sizes) d += s;
  Matrix out = Matrix::Identity(d, d);
  int off = 0;
  for (int s : sizes) {
    out.block(off, off, s, s) = random_orthonormal(s, s, rng);
    off += s;
  }
  return out;
}

}  // namespace riemhess
