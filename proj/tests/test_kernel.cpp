#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "amfh/kernel.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using amfh::AnchorSet;
using amfh::ErrorCode;
using amfh::Matrix;

TEST(SelectAnchors, FullDrawIsPermutation) {
  std::mt19937_64 rng(1);
  const Matrix x = oracle::Gaussian(4, 9, rng);
  const AnchorSet a = amfh::SelectAnchors(x, 9, 3);
  std::vector<std::size_t> idx = a.source_indices;
  std::sort(idx.begin(), idx.end());
  for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(idx[i], i);
  for (Eigen::Index j = 0; j < a.count(); ++j) {
    EXPECT_EQ(a.anchors.col(j),
              x.col(static_cast<Eigen::Index>(a.source_indices[
                  static_cast<std::size_t>(j)])));
  }
}

TEST(SelectAnchors, Deterministic) {
  std::mt19937_64 rng(2);
  const Matrix x = oracle::Gaussian(6, 50, rng);
  const AnchorSet a = amfh::SelectAnchors(x, 12, 77);
  const AnchorSet b = amfh::SelectAnchors(x, 12, 77);
  EXPECT_EQ(a.source_indices, b.source_indices);
  EXPECT_EQ(a.kernel_width, b.kernel_width);
  EXPECT_EQ(a.anchors, b.anchors);
}

TEST(SelectAnchors, DistinctIndices) {
  std::mt19937_64 rng(3);
  const Matrix x = oracle::Gaussian(3, 40, rng);
  std::vector<std::size_t> idx = amfh::SelectAnchors(x, 25, 9).source_indices;
  std::sort(idx.begin(), idx.end());
  EXPECT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
  EXPECT_LT(idx.back(), 40u);
}

TEST(SelectAnchors, TwoPointWidthIsTheirDistance) {
  Matrix x(2, 2);
  x << 0.0, 3.0, 0.0, 0.0;
  EXPECT_DOUBLE_EQ(amfh::SelectAnchors(x, 2, 0).kernel_width, 3.0);
}

TEST(SelectAnchors, CoincidentPointsFallBackToUnitWidth) {
  const Matrix x = Matrix::Ones(3, 5);
  EXPECT_EQ(amfh::SelectAnchors(x, 4, 0).kernel_width, 1.0);
}

TEST(SelectAnchors, WidthMatchesMeanPairDistance) {
  std::mt19937_64 rng(4);
  const Matrix x = oracle::Gaussian(5, 30, rng);
  const AnchorSet a = amfh::SelectAnchors(x, 20, 1);
  // 190 pairs, below the subsampling cap: every pair is used.
  double sum = 0.0;
  int pairs = 0;
  for (Eigen::Index i = 0; i < a.count(); ++i) {
    for (Eigen::Index j = i + 1; j < a.count(); ++j) {
      sum += (a.anchors.col(i) - a.anchors.col(j)).norm();
      ++pairs;
    }
  }
  EXPECT_NEAR(a.kernel_width, sum / pairs, 1e-12);
}

TEST(SelectAnchors, Errors) {
  const Matrix x = Matrix::Zero(2, 5);
  EXPECT_EQ(CodeOf([&] { amfh::SelectAnchors(x, 6, 0); }),
            ErrorCode::kInsufficientData);
  EXPECT_EQ(CodeOf([&] { amfh::SelectAnchors(x, 0, 0); }),
            ErrorCode::kInvalidArgument);
}

TEST(ApplyKernel, AnchorItselfMapsToOne) {
  std::mt19937_64 rng(5);
  const Matrix x = oracle::Gaussian(4, 6, rng);
  const AnchorSet a = amfh::SelectAnchors(x, 6, 0);
  const Matrix phi = amfh::ApplyKernel(x, a);
  for (Eigen::Index j = 0; j < a.count(); ++j) {
    EXPECT_DOUBLE_EQ(phi(j, static_cast<Eigen::Index>(
                                a.source_indices[static_cast<std::size_t>(j)])),
                     1.0);
  }
}

TEST(ApplyKernel, SquaredDistanceTwoSigmaSquared) {
  AnchorSet a;
  a.anchors = Matrix::Zero(2, 1);
  a.kernel_width = 1.5;
  Matrix x(2, 1);
  x << std::sqrt(2.0) * 1.5, 0.0;
  EXPECT_NEAR(amfh::ApplyKernel(x, a)(0, 0), std::exp(-1.0), 1e-15);
}

TEST(ApplyKernel, MatchesNaiveLoop) {
  std::mt19937_64 rng(6);
  const Matrix x = oracle::Gaussian(5, 10, rng);
  const AnchorSet a = amfh::SelectAnchors(x, 7, 2);
  const Matrix expected = oracle::Kernel(x, a.anchors, a.kernel_width);
  EXPECT_LT((amfh::ApplyKernel(x, a) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ApplyKernel, EntriesInUnitInterval) {
  std::mt19937_64 rng(7);
  const Matrix x = oracle::Gaussian(8, 40, rng) * 5.0;
  const AnchorSet a = amfh::SelectAnchors(x, 10, 2);
  const Matrix phi = amfh::ApplyKernel(oracle::Gaussian(8, 30, rng), a);
  EXPECT_GE(phi.minCoeff(), 0.0);
  EXPECT_LE(phi.maxCoeff(), 1.0);
}

TEST(ApplyKernel, Errors) {
  AnchorSet a;
  a.anchors = Matrix::Zero(3, 2);
  a.kernel_width = 1.0;
  EXPECT_EQ(CodeOf([&] { amfh::ApplyKernel(Matrix::Zero(4, 2), a); }),
            ErrorCode::kShape);
  a.kernel_width = 0.0;
  EXPECT_EQ(CodeOf([&] { amfh::ApplyKernel(Matrix::Zero(3, 2), a); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
