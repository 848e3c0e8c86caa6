#include "riemhess/lyapunov.hpp"

#include <cmath>

#include <fmt/format.h>

#include "riemhess/errors.hpp"

namespace riemhess {

LyapunovOperator::LyapunovOperator(const SpdPoint& p, std::vector<LyapunovTerm> terms)
    : p_(p.p()), p_inv_(p.inverse()), u_(p.eig().vectors), terms_(std::move(terms)) {
  if (terms_.empty()) throw ParameterError("LyapunovOperator: empty coefficient table");
  const Eigen::VectorXd& lambda = p.eig().values;
  const int n = static_cast<int>(lambda.size());
  divisors_ = Matrix::Zero(n, n);
  for (const LyapunovTerm& t : terms_) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        divisors_(i, j) += t.coeff * std::pow(lambda(i), t.left_power) *
                           std::pow(lambda(j), t.right_power);
      }
    }
  }
  const double scale = divisors_.cwiseAbs().maxCoeff();
  const double smallest = divisors_.cwiseAbs().minCoeff();
  if (!(smallest >= 1e-14 * scale) || !std::isfinite(scale)) {
    throw NumericalError(fmt::format(
        "LyapunovOperator: ill-posed, min |M_ij| = {:.3e} vs max {:.3e}", smallest, scale));
  }
}

LyapunovOperator LyapunovOperator::psd_horizontal(const SpdPoint& p, double alpha1, double beta) {
  return LyapunovOperator(p, {{0, 0, alpha1 - 2.0 * beta}, {1, -1, beta}, {-1, 1, beta}});
}

Matrix LyapunovOperator::solve(const Matrix& b) const {
  require_same_shape(p_, b, "LyapunovOperator::solve");
  const Matrix rotated = u_.transpose() * b * u_;
  return u_ * rotated.cwiseQuotient(divisors_) * u_.transpose();
}

Matrix LyapunovOperator::power(int k) const {
  Matrix out = Matrix::Identity(p_.rows(), p_.cols());
  const Matrix& base = k >= 0 ? p_ : p_inv_;
  for (int i = 0; i < std::abs(k); ++i) out = out * base;
  return out;
}

Matrix LyapunovOperator::apply(const Matrix& x) const {
  require_same_shape(p_, x, "LyapunovOperator::apply");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const LyapunovTerm& t : terms_) out += t.coeff * power(t.left_power) * x * power(t.right_power);
  return out;
}

}  // namespace riemhess
