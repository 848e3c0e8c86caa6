#pragma once

#include <vector>

#include "riemhess/spd.hpp"

namespace riemhess {

/// One term c P^s X P^t of an extended Lyapunov operator.
struct LyapunovTerm {
  int left_power;
  int right_power;
  double coeff;
};

/// X -> sum_k c_k P^{s_k} X P^{t_k} for an SPD matrix P. Inverted entrywise
/// in the eigenbasis P = U diag(lambda) U^T, where the operator becomes
/// division by M_ij = sum_k c_k lambda_i^{s_k} lambda_j^{t_k}.
class LyapunovOperator {
 public:
  /// Throws NumericalError when some |M_ij| < 1e-14 max |M|: the equation
  /// is then ill-posed. Well-posedness of a general table is the caller's
  /// responsibility.
  LyapunovOperator(const SpdPoint& p, std::vector<LyapunovTerm> terms);

  /// L(P) X = (alpha1 - 2 beta) X + beta (P X P^{-1} + P^{-1} X P); all
  /// divisors are positive for alpha1, beta > 0.
  static LyapunovOperator psd_horizontal(const SpdPoint& p, double alpha1, double beta);

  /// X with L(X) = b, as U ((U^T b U) / M) U^T.
  Matrix solve(const Matrix& b) const;
  /// L(X) from explicit matrix powers of P (no eigenbasis).
  Matrix apply(const Matrix& x) const;

  const Matrix& divisors() const { return divisors_; }
  const std::vector<LyapunovTerm>& terms() const { return terms_; }

 private:
  Matrix power(int k) const;

  Matrix p_;
  Matrix p_inv_;
  Matrix u_;
  std::vector<LyapunovTerm> terms_;
  Matrix divisors_;
};

}  // namespace riemhess
