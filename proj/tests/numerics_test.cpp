#include <gtest/gtest.h>

#include "riemhess/errors.hpp"
#include "riemhess/numerics.hpp"
#include "riemhess/random.hpp"
#include "support/oracles.hpp"

using namespace riemhess;

TEST(TrrInner, IdentityAndZero) {
  EXPECT_DOUBLE_EQ(trr_inner(Matrix::Identity(2, 2), Matrix::Identity(2, 2)), 2.0);
  Rng rng(1);
  EXPECT_DOUBLE_EQ(trr_inner(Matrix::Zero(3, 4), random_normal(3, 4, rng)), 0.0);
}

TEST(TrrInner, MatchesEntrywiseLoop) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_normal(3, 2, rng);
    const Matrix b = random_normal(3, 2, rng);
    EXPECT_NEAR(trr_inner(a, b), oracle::entrywise_inner(a, b), 1e-13);
    EXPECT_DOUBLE_EQ(trr_inner(a, b), trr_inner(b, a));
    EXPECT_GT(trr_inner(a, a), 0.0);
  }
}

TEST(TrrInner, ShapeMismatchThrows) {
  EXPECT_THROW(trr_inner(Matrix::Zero(2, 3), Matrix::Zero(3, 2)), DimensionError);
}

TEST(SymAsym, Decomposition) {
  Rng rng(3);
  const Matrix a = random_normal(4, 4, rng);
  EXPECT_LE((sym(a) + asym(a) - a).norm(), 1e-15);
  EXPECT_LE((sym(a) - sym(a).transpose()).norm(), 0.0);
  EXPECT_LE((asym(a) + asym(a).transpose()).norm(), 0.0);
  const Matrix s = sym(a);
  EXPECT_EQ(sym(s), s);
  EXPECT_LE(asym(s).norm(), 0.0);
  EXPECT_LE(sym(asym(a)).norm(), 0.0);
  EXPECT_THROW(sym(Matrix::Zero(2, 3)), DimensionError);
  EXPECT_THROW(asym(Matrix::Zero(2, 3)), DimensionError);
}

TEST(BlockPartition, Validation) {
  const BlockPartition p({2, 1}, 5);
  EXPECT_EQ(p.tail(), 2);
  EXPECT_EQ(p.num_blocks(), 2);
  EXPECT_EQ(p.offsets(), (std::vector<int>{0, 2, 3}));
  EXPECT_EQ(p.all_sizes(), (std::vector<int>{2, 1, 2}));
  EXPECT_NO_THROW(BlockPartition({}, 3));
  EXPECT_THROW(BlockPartition({2, 2}, 3), ParameterError);
  EXPECT_THROW(BlockPartition({0, 1}, 3), ParameterError);
}

TEST(Symf, EmptyPartitionIsSym) {
  Rng rng(4);
  const Matrix a = random_normal(5, 5, rng);
  EXPECT_LE((symf(a, BlockPartition({}, 5)) - sym(a)).norm(), 0.0);
}

TEST(Symf, SingleFullBlockIsIdentity) {
  Rng rng(5);
  const Matrix a = random_normal(5, 5, rng);
  EXPECT_LE((symf(a, BlockPartition({5}, 5)) - a).norm(), 0.0);
}

TEST(Symf, MatchesBlockwiseDisplay) {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = random_normal(6, 6, rng);
    const Matrix expected = oracle::blockwise_symf(a, {2, 2});
    EXPECT_LE((symf(a, BlockPartition({2, 2}, 6)) - expected).norm(), 1e-15);
  }
}

TEST(Symf, SelfAdjointAndIdempotent) {
  Rng rng(7);
  for (const auto& sizes : std::vector<std::vector<int>>{{}, {3}, {2, 1}, {1, 1, 1}, {2}}) {
    const BlockPartition part(sizes, 4);
    for (int t = 0; t < 10; ++t) {
      const Matrix a = random_normal(4, 4, rng);
      const Matrix b = random_normal(4, 4, rng);
      EXPECT_NEAR(trr_inner(symf(a, part), b), trr_inner(a, symf(b, part)), 1e-12);
      EXPECT_LE((symf(symf(a, part), part) - symf(a, part)).norm(), 1e-15);
    }
  }
  EXPECT_THROW(symf(Matrix::Zero(3, 3), BlockPartition({2}, 4)), DimensionError);
}

TEST(Eigh, Identity) {
  const SymmetricEigen e = eigh(Matrix::Identity(3, 3));
  EXPECT_LE((e.values - Eigen::Vector3d::Ones()).norm(), 1e-15);
}

TEST(Eigh, DiagonalDescending) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 3.0;
  const SymmetricEigen e = eigh(a);
  EXPECT_DOUBLE_EQ(e.values(0), 3.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
  // Signed permutation.
  EXPECT_NEAR(std::abs(e.vectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), 1.0, 1e-15);
}

TEST(Eigh, Reconstruction) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = sym(random_normal(5, 5, rng));
    const SymmetricEigen e = eigh(a);
    const Matrix rec = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LE((rec - a).norm(), 1e-12 * a.norm());
    EXPECT_LE((e.vectors.transpose() * e.vectors - Matrix::Identity(5, 5)).norm(), 1e-12);
    for (int i = 0; i + 1 < 5; ++i) EXPECT_GE(e.values(i), e.values(i + 1));
  }
}

TEST(Eigh, RejectsAsymmetricAndNonFinite) {
  Matrix a = Matrix::Identity(3, 3);
  a(0, 1) = 1e-6;
  EXPECT_THROW(eigh(a), InvariantError);
  a(0, 1) = 1e-13;  // within tolerance, symmetrized
  EXPECT_NO_THROW(eigh(a));
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(eigh(a), NumericalError);
  EXPECT_THROW(eigh(Matrix::Zero(2, 3)), DimensionError);
}

TEST(QrPositive, OrthonormalInput) {
  Rng rng(9);
  const Matrix q0 = random_orthonormal(6, 3, rng);
  const QrFactors f = qr_positive(q0);
  EXPECT_LE((f.q - q0).norm(), 1e-14);
  EXPECT_LE((f.r - Matrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(QrPositive, ScaledIdentity) {
  const QrFactors f = qr_positive(2.0 * Matrix::Identity(3, 3));
  EXPECT_LE((f.q - Matrix::Identity(3, 3)).norm(), 1e-15);
  EXPECT_LE((f.r - 2.0 * Matrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(QrPositive, Reconstruction) {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_normal(6, 3, rng);
    const QrFactors f = qr_positive(a);
    EXPECT_LE((f.q * f.r - a).norm(), 1e-12 * std::max(1.0, a.norm()));
    EXPECT_LE((f.q.transpose() * f.q - Matrix::Identity(3, 3)).norm(), 1e-13);
    for (int i = 0; i < 3; ++i) EXPECT_GT(f.r(i, i), 0.0);
    EXPECT_LE(f.r.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm(), 0.0);
  }
}

TEST(QrPositive, RankDeficientThrows) {
  Matrix a = Matrix::Zero(4, 2);
  a(0, 0) = 1.0;
  a(1, 0) = 1.0;
  a.col(1) = 2.0 * a.col(0);
  EXPECT_THROW(qr_positive(a), NumericalError);
  EXPECT_THROW(qr_positive(Matrix::Zero(2, 3)), DimensionError);
}

TEST(OrthogonalComplement, CompletesBasis) {
  Rng rng(11);
  const Matrix y = random_orthonormal(7, 3, rng);
  const Matrix yp = orthogonal_complement(y);
  ASSERT_EQ(yp.cols(), 4);
  EXPECT_LE((y.transpose() * yp).norm(), 1e-13);
  EXPECT_LE((yp.transpose() * yp - Matrix::Identity(4, 4)).norm(), 1e-13);
}
