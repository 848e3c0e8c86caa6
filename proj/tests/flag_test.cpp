#include <gtest/gtest.h>

#include "riemhess/diagnostics.hpp"
#include "riemhess/errors.hpp"
#include "riemhess/flag.hpp"
#include "riemhess/framework.hpp"
#include "riemhess/problems.hpp"
#include "support/oracles.hpp"

using namespace riemhess;
namespace fw = riemhess::framework;

namespace {

const std::vector<StiefelMetric> kMetrics = {{1.0, 1.0}, {1.0, 0.5}, {0.3, 2.7}};

struct Shape {
  int n;
  int d;
  std::vector<int> blocks;
};

const std::vector<Shape> kShapes = {
    {7, 4, {}}, {7, 4, {4}}, {7, 4, {2, 2}}, {8, 5, {1, 2}}, {8, 6, {3, 1, 2}}, {9, 5, {2}}};

Matrix m0(const AmbientVector& a) { return a.block(0); }

AmbientProblem<Matrix> flag_cost(const Flag& fl, Rng& rng) {
  return problems::flag_quadratic(problems::random_spd_matrix(fl.n(), rng),
                                  problems::flag_lambda(fl.partition()));
}

}  // namespace

TEST(FlagConstruction, RejectsBadPartitions) {
  EXPECT_THROW(Flag(6, 3, {2, 2}), ParameterError);
  EXPECT_THROW(Flag(6, 3, {0, 1}), ParameterError);
  EXPECT_THROW(Flag(2, 3, {1}), DimensionError);
  EXPECT_NO_THROW(Flag(6, 3, {1, 2}));
}

TEST(FlagSymfDim, MatchesRankOfSymf) {
  Rng rng(1);
  for (const Shape& sh : kShapes) {
    const Flag fl(sh.n, sh.d, sh.blocks);
    const AmbientVector like(Matrix::Zero(sh.d, sh.d));
    const Matrix dense = oracle::dense_matrix(
        [&](const AmbientVector& a) { return AmbientVector(symf(a.block(0), fl.partition())); },
        like);
    Eigen::JacobiSVD<Matrix> svd(dense);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) rank += svd.singularValues()(i) > 1e-10;
    EXPECT_EQ(fl.symf_dim(), rank) << fl.name();
  }
}

TEST(FlagReductions, NoBlocksIsStiefel) {
  Rng rng(2);
  const Matrix a = sym(random_normal(7, 7, rng));
  const auto f = problems::rayleigh(a);
  for (const StiefelMetric m : kMetrics) {
    const Flag fl(7, 4, {}, m);
    const Stiefel st(7, 4, m);
    for (int t = 0; t < 10; ++t) {
      const StiefelPoint x = st.random_point(rng);
      const Matrix w = random_normal(7, 4, rng);
      const Matrix xi = st.random_tangent(x, rng);
      const Matrix eta = st.random_tangent(x, rng);
      const Matrix eg = f.egrad(x.y());
      const Matrix eh = f.ehess(x.y(), xi);
      EXPECT_LE((fl.project(x, w) - st.project(x, w)).norm(), 1e-13);
      EXPECT_LE((fl.rgrad(x, eg) - st.rgrad(x, eg)).norm(), 1e-12);
      EXPECT_LE((fl.gamma(x, xi, eta) - st.gamma(x, xi, eta)).norm(), 1e-12);
      EXPECT_LE((fl.rhess11(x, eg, eh, xi) - st.rhess11(x, eg, eh, xi)).norm(), 1e-11);
    }
  }
}

TEST(FlagReductions, SingleFullBlockIsGrassmann) {
  Rng rng(3);
  const Matrix a = sym(random_normal(8, 8, rng));
  const auto f = problems::rayleigh(a);
  for (const StiefelMetric m : kMetrics) {
    const Flag fl(8, 3, {3}, m);
    for (int t = 0; t < 10; ++t) {
      const StiefelPoint x = fl.random_point(rng);
      const Matrix y = x.y();
      const Matrix pi0 = Matrix::Identity(8, 8) - y * y.transpose();
      const Matrix w = random_normal(8, 3, rng);
      const Matrix xi = fl.random_tangent(x, rng);
      const Matrix eta = fl.random_tangent(x, rng);
      EXPECT_LE((y.transpose() * xi).norm(), 1e-13);
      const Matrix eg = f.egrad(y);
      const Matrix eh = f.ehess(y, xi);
      EXPECT_LE((fl.project(x, w) - pi0 * w).norm(), 1e-13);
      EXPECT_LE((fl.rgrad(x, eg) - pi0 * eg / m.alpha0).norm(), 1e-12);
      EXPECT_LE((fl.gamma(x, xi, eta) - y * (xi.transpose() * eta)).norm(), 1e-12);
      const Matrix grass = pi0 * (eh - xi * (y.transpose() * eg)) / m.alpha0;
      EXPECT_LE((fl.rhess11(x, eg, eh, xi) - grass).norm(), 1e-11);
    }
  }
}

TEST(FlagHorizontal, OutputsAreHorizontal) {
  Rng rng(4);
  for (const Shape& sh : kShapes) {
    for (const StiefelMetric m : kMetrics) {
      const Flag fl(sh.n, sh.d, sh.blocks, m);
      const auto f = flag_cost(fl, rng);
      const StiefelPoint x = fl.random_point(rng);
      const Matrix w = fl.random_ambient(x, rng);
      const Matrix xi = fl.random_tangent(x, rng);
      const Matrix p = fl.project(x, w);
      EXPECT_LE(fl.constraint_residual(x, p), 1e-12);
      EXPECT_LE((fl.project(x, p) - p).norm(), 1e-12);
      EXPECT_LE(fl.constraint_residual(x, xi), 1e-12);
      EXPECT_NEAR(fl.inner(x, xi, xi), 1.0, 1e-12);
      const Matrix eg = f.egrad(x.y());
      const Matrix rg = fl.rgrad(x, eg);
      EXPECT_LE(fl.constraint_residual(x, rg), 1e-11 * (1 + rg.norm()));
      const Matrix h = fl.rhess11(x, eg, f.ehess(x.y(), xi), xi);
      EXPECT_LE(fl.constraint_residual(x, h), 1e-11 * (1 + h.norm()));
      // Vertical directions Y diag(a_i) with a_i antisymmetric are annihilated.
      Matrix vert = Matrix::Zero(sh.d, sh.d);
      const auto offs = fl.partition().offsets();
      for (int b = 0; b < fl.partition().num_blocks(); ++b) {
        const int s = fl.partition().sizes()[b];
        vert.block(offs[b], offs[b], s, s) = asym(random_normal(s, s, rng));
      }
      EXPECT_LE(fl.project(x, x.y() * vert).norm(), 1e-13);
    }
  }
}

TEST(FlagHorizontal, ProjectionIsMetricOrthogonal) {
  Rng rng(5);
  for (const StiefelMetric m : kMetrics) {
    const Flag fl(8, 6, {3, 1, 2}, m);
    const StiefelPoint x = fl.random_point(rng);
    const Matrix w = fl.random_ambient(x, rng);
    const Matrix xi = fl.random_tangent(x, rng);
    EXPECT_NEAR(fl.inner(x, w - fl.project(x, w), xi), 0.0, 1e-12);
  }
}

TEST(FlagFramework, ClosedFormsAgree) {
  Rng rng(6);
  for (const Shape& sh : kShapes) {
    for (const StiefelMetric m : kMetrics) {
      const Flag fl(sh.n, sh.d, sh.blocks, m);
      const auto f = flag_cost(fl, rng);
      const auto report = diagnostics::check_closed_form_vs_framework(fl, f, 10, 60);
      EXPECT_TRUE(report.passed) << fl.name() << " " << report.max_error;
      // CG path without the registered gram solver.
      const StiefelPoint x = fl.random_point(rng);
      const auto s = fl.structure(x, {false, false});
      const Matrix w = fl.random_ambient(x, rng);
      EXPECT_LE((m0(fw::project(s, w)) - fl.project(x, w)).norm(), 1e-9);
      EXPECT_EQ(s.constraint_dim, fl.symf_dim());
    }
  }
}

TEST(FlagFramework, DenseLeastSquaresOracle) {
  Rng rng(7);
  const Flag fl(6, 4, {1, 2}, {0.3, 2.7});
  const StiefelPoint x = fl.random_point(rng);
  const auto s = fl.structure(x);
  const AmbientVector like(Matrix::Zero(6, 4));
  const Matrix j = oracle::dense_matrix(s.constraint, like);
  const Matrix g = oracle::dense_matrix(s.metric, like);
  const Matrix basis = oracle::null_basis(j);
  const Matrix w = random_normal(6, 4, rng);
  const Eigen::VectorXd proj =
      oracle::g_least_squares(basis, g, oracle::flatten(AmbientVector(w)));
  const Matrix expected = m0(oracle::unflatten(proj, like));
  EXPECT_LE((fl.project(x, w) - expected).norm(), 1e-10);
}

TEST(FlagEquivariance, BlockGroupAction) {
  Rng rng(8);
  for (const Shape& sh : kShapes) {
    for (const StiefelMetric m : kMetrics) {
      const Flag fl(sh.n, sh.d, sh.blocks, m);
      const auto f = flag_cost(fl, rng);
      const StiefelPoint x = fl.random_point(rng);
      const Matrix u = random_block_orthogonal(sh.blocks, fl.partition().tail(), rng);
      const StiefelPoint xu(x.y() * u);
      EXPECT_NEAR(f.cost(xu.y()), f.cost(x.y()), 1e-10 * (1 + std::abs(f.cost(x.y()))));
      const Matrix w = fl.random_ambient(x, rng);
      const Matrix xi = fl.random_tangent(x, rng);
      const Matrix eta = fl.random_tangent(x, rng);
      EXPECT_LE((fl.project(xu, w * u) - fl.project(x, w) * u).norm(), 1e-12);
      const Matrix rg = fl.rgrad(x, f.egrad(x.y()));
      EXPECT_LE((fl.rgrad(xu, f.egrad(xu.y())) - rg * u).norm(), 1e-9 * (1 + rg.norm()));
      const Matrix h = fl.rhess11(x, f.egrad(x.y()), f.ehess(x.y(), xi), xi);
      const Matrix hu = fl.rhess11(xu, f.egrad(xu.y()), f.ehess(xu.y(), xi * u), xi * u);
      EXPECT_LE((hu - h * u).norm(), 1e-9 * (1 + h.norm()));
      EXPECT_LE((fl.project(xu, fl.gamma(xu, xi * u, eta * u)) -
                 fl.project(x, fl.gamma(x, xi, eta)) * u).norm(),
                1e-11);
    }
  }
}

TEST(FlagTorsion, RawDifferenceIsVertical) {
  // symf keeps the diagonal blocks of the antisymmetric part of xi^T eta,
  // so Gamma is only symmetric modulo vertical vectors.
  Rng rng(9);
  const Flag fl(7, 4, {2, 2});
  const StiefelPoint x = fl.random_point(rng);
  const Matrix xi = fl.random_tangent(x, rng);
  const Matrix eta = fl.random_tangent(x, rng);
  const Matrix diff = fl.gamma(x, xi, eta) - fl.gamma(x, eta, xi);
  EXPECT_GT(diff.norm(), 1e-6);
  EXPECT_LE(fl.project(x, diff).norm(), 1e-13);
}

TEST(FlagDerivatives, GradientAndHessianFiniteDifferences) {
  Rng rng(10);
  for (const Shape& sh : kShapes) {
    for (const StiefelMetric m : kMetrics) {
      const Flag fl(sh.n, sh.d, sh.blocks, m);
      const auto f = flag_cost(fl, rng);
      for (const auto& r : {diagnostics::check_gradient_fd(fl, f, 5, 11),
                            diagnostics::check_hessian_fd(fl, f, 5, 12),
                            diagnostics::check_hessian_duality(fl, f, 10, 13)}) {
        EXPECT_TRUE(r.passed) << fl.name() << " " << r.check << " " << r.max_error;
      }
    }
  }
}

TEST(FlagDiagnostics, IdentitySuite) {
  for (const Shape& sh : kShapes) {
    for (const StiefelMetric m : kMetrics) {
      const Flag fl(sh.n, sh.d, sh.blocks, m);
      for (const auto& r : {diagnostics::check_projection(fl, 20, 1),
                            diagnostics::check_projection_self_adjoint(fl, 20, 2),
                            diagnostics::check_torsion(fl, 20, 3),
                            diagnostics::check_metric_compatibility(fl, 10, 4),
                            diagnostics::check_metric_derivatives(fl, 10, 5)}) {
        EXPECT_TRUE(r.passed) << fl.name() << " " << r.check << " " << r.max_error << " " << r.note;
      }
    }
  }
}
