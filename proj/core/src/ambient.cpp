#include "riemhess/ambient.hpp"

#include <cmath>

#include "riemhess/errors.hpp"

namespace riemhess {

AmbientVector::AmbientVector(Matrix single) { blocks_.push_back(std::move(single)); }

AmbientVector::AmbientVector(std::initializer_list<Matrix> blocks) : blocks_(blocks) {}

AmbientVector::AmbientVector(std::vector<Matrix> blocks) : blocks_(std::move(blocks)) {}

AmbientVector AmbientVector::zeros_like() const {
  std::vector<Matrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(Matrix::Zero(b.rows(), b.cols()));
  return AmbientVector(std::move(out));
}

bool AmbientVector::same_shape(const AmbientVector& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].rows() != other.blocks_[i].rows() ||
        blocks_[i].cols() != other.blocks_[i].cols()) {
      return false;
    }
  }
  return true;
}

double AmbientVector::norm() const { return std::sqrt(trr_inner(*this, *this)); }

bool AmbientVector::all_finite() const {
  for (const auto& b : blocks_) {
    if (!b.allFinite()) return false;
  }
  return true;
}

static void require_same(const AmbientVector& a, const AmbientVector& b, const char* where) {
  if (!a.same_shape(b)) throw DimensionError(std::string(where) + ": ambient shape mismatch");
}

AmbientVector& AmbientVector::operator+=(const AmbientVector& other) {
  require_same(*this, other, "AmbientVector::operator+=");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

AmbientVector& AmbientVector::operator-=(const AmbientVector& other) {
  require_same(*this, other, "AmbientVector::operator-=");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

AmbientVector& AmbientVector::operator*=(double s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AmbientVector operator+(AmbientVector a, const AmbientVector& b) { return a += b; }
AmbientVector operator-(AmbientVector a, const AmbientVector& b) { return a -= b; }
AmbientVector operator-(AmbientVector a) { return a *= -1.0; }
AmbientVector operator*(double s, AmbientVector a) { return a *= s; }
AmbientVector operator*(AmbientVector a, double s) { return a *= s; }

double trr_inner(const AmbientVector& a, const AmbientVector& b) {
  require_same(a, b, "trr_inner");
  double acc = 0.0;
  for (int i = 0; i < a.num_blocks(); ++i) acc += trr_inner(a.block(i), b.block(i));
  return acc;
}

}  // namespace riemhess
