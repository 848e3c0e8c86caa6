#pragma once

#include <initializer_list>
#include <vector>

#include "riemhess/numerics.hpp"

namespace riemhess {

/// Element of an ambient inner-product space built as a product of matrix
/// spaces: one block for Stiefel/SPD, two blocks (Y-part, P-part) for the
/// fixed-rank PSD quotient. Also used for the constraint space E_J and the
/// range space E_N. The inner product is the sum of blockwise trace products.
class AmbientVector {
 public:
  AmbientVector() = default;
  AmbientVector(Matrix single);  // NOLINT(google-explicit-constructor)
  AmbientVector(std::initializer_list<Matrix> blocks);
  explicit AmbientVector(std::vector<Matrix> blocks);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Matrix& block(int i) const { return blocks_.at(i); }
  Matrix& block(int i) { return blocks_.at(i); }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  /// Same shape, all zeros.
  AmbientVector zeros_like() const;
  bool same_shape(const AmbientVector& other) const;
  double norm() const;
  bool all_finite() const;

  AmbientVector& operator+=(const AmbientVector& other);
  AmbientVector& operator-=(const AmbientVector& other);
  AmbientVector& operator*=(double s);

 private:
  std::vector<Matrix> blocks_;
};

AmbientVector operator+(AmbientVector a, const AmbientVector& b);
AmbientVector operator-(AmbientVector a, const AmbientVector& b);
AmbientVector operator-(AmbientVector a);
AmbientVector operator*(double s, AmbientVector a);
AmbientVector operator*(AmbientVector a, double s);

/// Sum of blockwise trace inner products.
double trr_inner(const AmbientVector& a, const AmbientVector& b);

}  // namespace riemhess
