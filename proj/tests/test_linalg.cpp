#include "oracles.hpp"

#include "yfwl/error.hpp"
#include "yfwl/linalg.hpp"

#include <gtest/gtest.h>

using namespace yfwl;

namespace {

std::mt19937_64 rng_for(int seed) { return std::mt19937_64(static_cast<std::uint64_t>(seed)); }

}  // namespace

TEST(SolveLs, IdentityDesign) {
  Vec y(3);
  y << 1, 2, 3;
  EXPECT_LT(oracle::rel(solve_ls(Mat::Identity(3, 3), y), y), 1e-15);
}

TEST(SolveLs, MeanOfOnesColumn) {
  Vec y(4);
  y << 1, 2, 3, 4;
  EXPECT_NEAR(solve_ls(Mat::Ones(4, 1), y)(0), 2.5, 1e-15);
}

TEST(SolveLs, MatchesDenseInverse) {
  auto rng = rng_for(1);
  const Mat X = oracle::normal(rng, 6, 2);
  const Mat y = oracle::normal(rng, 6, 1);
  const Mat b = solve_ls(X, y);
  EXPECT_LT(oracle::rel(b, oracle::ols(y, X)), 1e-12);
  EXPECT_LT((X.transpose() * (y - X * b)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SolveLs, RankDeficientNamesColumn) {
  Mat X(4, 3);
  X << 1, 2, 3, 1, 0, 1, 1, 1, 2, 1, 5, 6;  // third column = first + second
  try {
    solve_ls(X, Vec::Ones(4));
    FAIL() << "expected RankDeficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankDeficient);
    EXPECT_GE(e.column(), 0);
  }
}

TEST(Residualize, Examples) {
  auto rng = rng_for(2);
  const Mat X = oracle::normal(rng, 10, 3);
  const Mat V = oracle::normal(rng, 10, 2);
  EXPECT_LT(residualize(X, X).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT(oracle::rel(residualize(X, residualize(X, V)), residualize(X, V)), 1e-13);
  EXPECT_LT((X.transpose() * residualize(X, V)).cwiseAbs().maxCoeff(), 1e-12);

  Vec v(3);
  v << 1, 2, 3;
  Vec expected(3);
  expected << -1, 0, 1;
  EXPECT_LT((residualize(Mat::Ones(3, 1), v) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Project, Examples) {
  auto rng = rng_for(3);
  const Mat X = oracle::normal(rng, 12, 3);
  const Mat V = oracle::normal(rng, 12, 2);
  EXPECT_LT(oracle::rel(project(X, X), X), 1e-13);
  EXPECT_LT(project(X, residualize(X, V)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT(oracle::rel(project(X, V), oracle::hat(X) * V), 1e-12);
  EXPECT_LT(oracle::rel(project(X, V) + residualize(X, V), V), 1e-14);
}

TEST(Projector, EmptyBasisIsZeroProjection) {
  const Projector p(Mat(5, 0), "empty");
  const Vec v = Vec::LinSpaced(5, 1, 5);
  EXPECT_EQ(p.project(v).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(p.residualize(v), v);
  EXPECT_EQ(p.leverages().sum(), 0.0);
}

TEST(Projector, DenseHatRespectsCap) {
  const Projector p(Mat::Ones(10, 1));
  EXPECT_LT(oracle::rel(p.dense_hat(), oracle::hat(Mat::Ones(10, 1))), 1e-14);
  EXPECT_THROW(p.dense_hat(5), Error);
}

TEST(Projector, PythagoreanIdentity) {
  auto rng = rng_for(4);
  for (int rep = 0; rep < 50; ++rep) {
    const Mat X = oracle::normal(rng, 40, 1 + rep % 5);
    const Vec v = oracle::normal(rng, 40, 1);
    const Projector p(X);
    const double lhs = p.project(v).squaredNorm() + p.residualize(v).squaredNorm();
    EXPECT_NEAR(lhs / v.squaredNorm(), 1.0, 1e-10);
  }
}

TEST(Projector, DecompositionOfInstrumentSpace) {
  auto rng = rng_for(5);
  for (int rep = 0; rep < 50; ++rep) {
    const Mat W1 = oracle::normal(rng, 30, 1 + rep % 3);
    const Mat Z2 = oracle::normal(rng, 30, 1 + rep % 4);
    const Vec v = oracle::normal(rng, 30, 1);
    const Mat Z2t = residualize(W1, Z2);
    const Vec lhs = project(oracle::cat(W1, Z2), v);
    const Vec rhs = project(W1, v) + project(Z2t, v);
    EXPECT_LT(oracle::rel(lhs, rhs), 1e-8);
    EXPECT_LT(project(W1, project(Z2t, v)).norm() / v.norm(), 1e-8);
  }
}

TEST(Projector, TraceOfHatEqualsRank) {
  auto rng = rng_for(6);
  for (int k = 1; k <= 6; ++k) {
    const Mat X = oracle::normal(rng, 25, k);
    EXPECT_NEAR(Projector(X).leverages().sum(), static_cast<double>(k), 1e-8);
    EXPECT_LT(oracle::rel(Projector(X).leverages(), oracle::leverages(X)), 1e-10);
  }
}

TEST(Projector, GramInverseMatchesDense) {
  auto rng = rng_for(7);
  const Mat X = oracle::normal(rng, 20, 4);
  EXPECT_LT(oracle::rel(Projector(X).gram_inverse(), oracle::inv(X.transpose() * X)), 1e-10);
}

TEST(PartitionedInverse, OrthogonalBlocks) {
  Mat W(4, 2);
  W << 1, 1, 1, -1, 1, 1, 1, -1;
  const auto inv = partitioned_inverse(W.leftCols(1), W.rightCols(1));
  EXPECT_LT(inv.W12.cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(inv.W11(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(inv.W22(0, 0), 0.25, 1e-15);
}

TEST(PartitionedInverse, MatchesDenseInverse) {
  auto rng = rng_for(8);
  const Mat W = oracle::normal(rng, 8, 4);
  const auto inv = partitioned_inverse(W.leftCols(2), W.rightCols(2));
  EXPECT_LT(oracle::rel(inv.assemble(), oracle::inv(W.transpose() * W)), 1e-10);
}

TEST(PartitionedInverse, EmptyLeadingBlock) {
  auto rng = rng_for(9);
  const Mat W2 = oracle::normal(rng, 10, 3);
  const auto inv = partitioned_inverse(Mat(10, 0), W2);
  EXPECT_EQ(inv.W11.size(), 0);
  EXPECT_LT(oracle::rel(inv.W22, oracle::inv(W2.transpose() * W2)), 1e-10);
}

TEST(PartitionedInverse, RandomInstancesUpToTen) {
  auto rng = rng_for(10);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int rep = 0; rep < 100; ++rep) {
    const int k1 = dim(rng), k2 = dim(rng);
    const Mat W = oracle::normal(rng, 20 + rep, k1 + k2);
    const Mat dense = oracle::inv(W.transpose() * W);
    const Mat blocks = partitioned_inverse(W.leftCols(k1), W.rightCols(k2)).assemble();
    EXPECT_LT((blocks - dense).norm() / dense.norm(), 1e-8);
  }
}

TEST(GenEigen, Examples) {
  auto rng = rng_for(11);
  const Mat R = oracle::normal(rng, 6, 3);
  const Mat B = R.transpose() * R;
  EXPECT_NEAR(smallest_gen_eigenvalue(B, B), 1.0, 1e-12);
  EXPECT_NEAR(smallest_gen_eigenvalue(2.0 * Mat::Identity(3, 3), Mat::Identity(3, 3)), 2.0, 1e-15);
}

TEST(GenEigen, MatchesCharacteristicRootScan) {
  auto rng = rng_for(12);
  for (int rep = 0; rep < 10; ++rep) {
    const Mat Ra = oracle::normal(rng, 8, 3);
    const Mat Rb = oracle::normal(rng, 8, 3);
    const Mat A = Ra.transpose() * Ra;
    const Mat B = Rb.transpose() * Rb;
    EXPECT_NEAR(smallest_gen_eigenvalue(A, B), oracle::smallest_root(A, B), 1e-8);
  }
}

TEST(GenEigen, NonDefiniteBIsRejected) {
  Mat B = Mat::Identity(2, 2);
  B(1, 1) = -1;
  try {
    smallest_gen_eigenvalue(Mat::Identity(2, 2), B);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
  }
}

TEST(RelativeDelta, Basics) {
  Vec a(2), b(2);
  a << 1, 2;
  b << 1, 2.5;
  EXPECT_DOUBLE_EQ(relative_delta(a, b), 0.2);
  EXPECT_EQ(relative_delta(Vec(0), Vec(0)), 0.0);
  EXPECT_EQ(relative_delta(Vec::Zero(2), Vec::Zero(2)), 0.0);
}
