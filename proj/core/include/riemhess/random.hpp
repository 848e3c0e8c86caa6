#pragma once

#include <cstdint>
#include <random>

#include "riemhess/numerics.hpp"

namespace riemhess {

/// All randomness in the library flows from generators of this type.
using Rng = std::mt19937_64;

Matrix random_normal(int rows, int cols, Rng& rng);

/// Standard-normal matrix scaled to unit Frobenius norm.
Matrix random_unit(int rows, int cols, Rng& rng);

/// Random symmetric matrix with unit Frobenius norm.
Matrix random_symmetric_unit(int n, Rng& rng);

/// n x d matrix with orthonormal columns (QR of a standard-normal matrix).
Matrix random_orthonormal(int n, int d, Rng& rng);

/// Q diag(lambda) Q^T with Q Haar-like orthogonal and log(lambda) uniform in
/// [log(lo), log(hi)].
Matrix random_spd(int n, double lo, double hi, Rng& rng);

/// d x d block-diagonal orthogonal matrix with independent random blocks of
/// the given sizes (the trailing `tail` block is the identity).
Matrix random_block_orthogonal(const std::vector<int>& sizes, int tail, Rng& rng);

}  // namespace riemhess
