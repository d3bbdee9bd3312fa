#include <gtest/gtest.h>

#include <random>

#include "amfh/centers.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using amfh::CenterTable;
using amfh::ErrorCode;
using amfh::LabelSet;
using amfh::SignMatrix;

TEST(Hadamard, BaseCases) {
  EXPECT_EQ(amfh::SylvesterHadamard(1), amfh::HadamardMatrix::Constant(1, 1, 1));
  amfh::HadamardMatrix h2(2, 2);
  h2 << 1, 1, 1, -1;
  EXPECT_EQ(amfh::SylvesterHadamard(2), h2);
}

TEST(Hadamard, MatchesParityFormula) {
  for (std::size_t order = 1; order <= 256; order *= 2) {
    const SignMatrix expected = oracle::HadamardByParity(order);
    EXPECT_EQ(amfh::SylvesterHadamard(order).cast<std::int8_t>(), expected)
        << "order " << order;
  }
}

TEST(Hadamard, OrthogonalRowsAndColumns) {
  for (std::size_t order : {1, 2, 4, 8, 64}) {
    const amfh::HadamardMatrix h = amfh::SylvesterHadamard(order);
    const amfh::HadamardMatrix eye =
        static_cast<int>(order) *
        amfh::HadamardMatrix::Identity(h.rows(), h.cols());
    EXPECT_EQ(h * h.transpose(), eye);
    EXPECT_EQ(h.transpose() * h, eye);
  }
}

TEST(Hadamard, Order4ColumnsDifferInHalf) {
  const SignMatrix h = amfh::SylvesterHadamard(4).cast<std::int8_t>();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) EXPECT_EQ(amfh::HammingDistance(h, i, j), 2u);
  }
}

TEST(Hadamard, RejectsInvalidOrders) {
  for (std::size_t order : {0, 3, 6, 12, 100}) {
    EXPECT_EQ(CodeOf([&] { amfh::SylvesterHadamard(order); }),
              ErrorCode::kInvalidOrder);
  }
}

TEST(RequiredOrder, Examples) {
  EXPECT_EQ(amfh::RequiredOrder(16, 10), 16u);
  EXPECT_EQ(amfh::RequiredOrder(10, 10), 16u);
  EXPECT_EQ(amfh::RequiredOrder(128, 81), 128u);
  EXPECT_EQ(amfh::RequiredOrder(48, 20), 64u);
  EXPECT_EQ(amfh::RequiredOrder(8, 81), 128u);
  EXPECT_EQ(amfh::RequiredOrder(1, 2), 2u);
}

TEST(LshReduce, DeterministicUnderSeed) {
  const amfh::HadamardMatrix h = amfh::SylvesterHadamard(64);
  EXPECT_EQ(amfh::LshReduce(h, 48, 11), amfh::LshReduce(h, 48, 11));
  EXPECT_NE(amfh::LshReduce(h, 48, 11), amfh::LshReduce(h, 48, 12));
}

TEST(LshReduce, SingleColumnIsSigns) {
  const amfh::HadamardMatrix h = amfh::SylvesterHadamard(8).leftCols(1);
  const SignMatrix out = amfh::LshReduce(h, 5, 3);
  ASSERT_EQ(out.rows(), 5);
  ASSERT_EQ(out.cols(), 1);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    EXPECT_TRUE(out(i) == 1 || out(i) == -1);
  }
}

TEST(LshReduce, OrthogonalInputsLandNearHalfDistance) {
  // Sign projections of orthogonal vectors disagree with probability 1/2.
  const amfh::HadamardMatrix h = amfh::SylvesterHadamard(64);
  const std::size_t r = 64;
  double sum = 0.0;
  int pairs = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SignMatrix out = amfh::LshReduce(h.leftCols(20), r, seed);
    for (Eigen::Index i = 0; i < out.cols(); ++i) {
      for (Eigen::Index j = i + 1; j < out.cols(); ++j) {
        sum += static_cast<double>(oracle::Hamming(out, i, out, j));
        ++pairs;
      }
    }
  }
  const double mean = sum / pairs;
  EXPECT_GE(mean, 0.45 * r);
  EXPECT_LE(mean, 0.55 * r);
}

TEST(LshReduce, RejectsZeroLength) {
  EXPECT_EQ(CodeOf([] { amfh::LshReduce(amfh::SylvesterHadamard(4), 0, 0); }),
            ErrorCode::kInvalidLength);
}

TEST(BuildCenterTable, ExactTableUsesLeadingColumns) {
  const CenterTable t = amfh::BuildCenterTable(16, 10, 99);
  EXPECT_EQ(t.order, 16u);
  EXPECT_TRUE(t.exact);
  EXPECT_EQ(t.centers, oracle::HadamardByParity(16).leftCols(10));
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10; ++j) {
      EXPECT_EQ(oracle::Hamming(t.centers, i, t.centers, j), 8u);
    }
  }
}

TEST(BuildCenterTable, TwoCentersAtHalfLength) {
  const CenterTable t = amfh::BuildCenterTable(16, 2, 0);
  EXPECT_EQ(oracle::Hamming(t.centers, 0, t.centers, 1), 8u);
}

TEST(BuildCenterTable, LshTablePassesAudit) {
  const CenterTable t = amfh::BuildCenterTable(48, 20, 7);
  EXPECT_EQ(t.order, 64u);
  EXPECT_FALSE(t.exact);
  EXPECT_EQ(t.centers.rows(), 48);
  EXPECT_EQ(t.centers.cols(), 20);
  const amfh::CenterAudit audit = amfh::AuditCenters(t);
  EXPECT_TRUE(audit.pass);
  EXPECT_GE(audit.average, 0.45 * 48);
}

TEST(BuildCenterTable, NeverReturnsFailingTable) {
  for (std::size_t r : {12, 24, 48, 100}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      try {
        const CenterTable t = amfh::BuildCenterTable(r, 20, seed);
        EXPECT_TRUE(amfh::AuditCenters(t).pass);
        EXPECT_GE(t.seed, seed);
        EXPECT_LT(t.seed, seed + amfh::kLshMaxAttempts);
      } catch (const amfh::Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kCenterSeparation);
      }
    }
  }
}

TEST(BuildCenterTable, RejectsSingleClass) {
  EXPECT_EQ(CodeOf([] { amfh::BuildCenterTable(16, 1, 0); }),
            ErrorCode::kInvalidArgument);
}

TEST(AuditCenters, ExactTableAverage) {
  const amfh::CenterAudit audit = amfh::AuditCenters(amfh::BuildCenterTable(16, 10, 0));
  EXPECT_EQ(audit.average, 8.0);
  EXPECT_EQ(audit.minimum, 8u);
  EXPECT_TRUE(audit.pass);
}

TEST(AuditCenters, DuplicateColumnFails) {
  CenterTable t = amfh::BuildCenterTable(16, 4, 0);
  t.centers.col(3) = t.centers.col(2);
  const amfh::CenterAudit audit = amfh::AuditCenters(t);
  EXPECT_FALSE(audit.pass);
  EXPECT_EQ(audit.minimum, 0u);
  EXPECT_LT(audit.average, 8.0);
}

TEST(AuditCenters, TwoCenterTable) {
  const amfh::CenterAudit audit = amfh::AuditCenters(amfh::BuildCenterTable(32, 2, 0));
  EXPECT_EQ(audit.average, 16.0);
  EXPECT_EQ(audit.minimum, 16u);
}

TEST(AssignTargetCodes, SingleLabelPassthrough) {
  const CenterTable t = amfh::BuildCenterTable(16, 10, 0);
  LabelSet labels;
  labels.num_classes = 10;
  labels.labels = {{3}};
  EXPECT_EQ(amfh::AssignTargetCodes(t, labels), t.centers.col(3));
}

TEST(AssignTargetCodes, TwoLabelTiesGoPositive) {
  CenterTable t;
  t.code_length = 4;
  t.num_categories = 2;
  t.order = 4;
  t.centers.resize(4, 2);
  t.centers << 1, 1, 1, 1, 1, -1, 1, -1;
  LabelSet labels;
  labels.num_classes = 2;
  labels.labels = {{0, 1}};
  SignMatrix expected(4, 1);
  expected << 1, 1, 1, 1;
  EXPECT_EQ(amfh::AssignTargetCodes(t, labels), expected);
}

TEST(AssignTargetCodes, ThreeLabelsIsMajorityVote) {
  const CenterTable t = amfh::BuildCenterTable(8, 8, 0);
  LabelSet labels;
  labels.num_classes = 8;
  labels.labels = {{0, 1, 2}};
  EXPECT_EQ(amfh::AssignTargetCodes(t, labels),
            oracle::MajorityVote(t.centers, {0, 1, 2}));
}

TEST(AssignTargetCodes, RandomMultiLabelMatchesMajority) {
  const CenterTable t = amfh::BuildCenterTable(32, 20, 0);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> cls(0, 19);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> pick;
    while (pick.size() < 3) {
      const int c = cls(rng);
      if (std::find(pick.begin(), pick.end(), c) == pick.end()) pick.push_back(c);
    }
    std::sort(pick.begin(), pick.end());
    LabelSet labels;
    labels.num_classes = 20;
    labels.labels = {pick};
    EXPECT_EQ(amfh::AssignTargetCodes(t, labels), oracle::MajorityVote(t.centers, pick));
  }
}

TEST(AssignTargetCodes, RejectsBadLabels) {
  const CenterTable t = amfh::BuildCenterTable(16, 4, 0);
  LabelSet empty;
  empty.num_classes = 4;
  empty.labels = {{1}, {}};
  EXPECT_EQ(CodeOf([&] { amfh::AssignTargetCodes(t, empty); }),
            ErrorCode::kInvalidLabel);
  LabelSet out_of_range;
  out_of_range.num_classes = 4;
  out_of_range.labels = {{4}};
  EXPECT_EQ(CodeOf([&] { amfh::AssignTargetCodes(t, out_of_range); }),
            ErrorCode::kInvalidLabel);
}

}  // namespace
