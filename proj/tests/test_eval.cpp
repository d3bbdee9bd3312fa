#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "amfh/codes.hpp"
#include "amfh/eval.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using amfh::ErrorCode;
using amfh::LabelSet;
using amfh::PackedCodes;
using amfh::SignMatrix;

TEST(PackedCodes, RoundTrip) {
  std::mt19937_64 rng(1);
  for (Eigen::Index bits : {1, 7, 63, 64, 65, 130}) {
    const SignMatrix codes = oracle::RandomSigns(bits, 11, rng);
    const PackedCodes packed(codes);
    EXPECT_EQ(packed.bits(), static_cast<std::size_t>(bits));
    EXPECT_EQ(packed.Unpack(), codes);
  }
}

TEST(PackedCodes, DistanceMatchesBitLoop) {
  std::mt19937_64 rng(2);
  const SignMatrix a = oracle::RandomSigns(100, 20, rng);
  const SignMatrix b = oracle::RandomSigns(100, 15, rng);
  const PackedCodes pa(a);
  const PackedCodes pb(b);
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      EXPECT_EQ(pa.Distance(static_cast<std::size_t>(i), pb,
                            static_cast<std::size_t>(j)),
                oracle::Hamming(a, i, b, j));
    }
  }
}

TEST(HammingRank, ExactMatchRanksFirstLowestIndex) {
  std::mt19937_64 rng(3);
  SignMatrix db = oracle::RandomSigns(16, 10, rng);
  db.col(7) = db.col(4);
  const amfh::RankedRetrieval r = amfh::HammingRank(SignMatrix(db.col(4)), db);
  EXPECT_EQ(r.indices[0], 4u);
  EXPECT_EQ(r.distances[0], 0u);
  EXPECT_EQ(r.indices[1], 7u);
  EXPECT_EQ(r.distances[1], 0u);
}

TEST(HammingRank, AntipodeRanksLast) {
  std::mt19937_64 rng(4);
  SignMatrix db = oracle::RandomSigns(16, 12, rng);
  const SignMatrix query = -db.col(5);
  // Keep every other column strictly closer than the antipode.
  for (Eigen::Index j = 0; j < db.cols(); ++j) {
    if (j != 5 && oracle::Hamming(query, 0, db, j) == 16) db(0, j) = query(0, 0);
  }
  const amfh::RankedRetrieval r = amfh::HammingRank(query, db);
  EXPECT_EQ(r.indices.back(), 5u);
  EXPECT_EQ(r.distances.back(), 16u);
}

TEST(HammingRank, MatchesNaiveOracle) {
  std::mt19937_64 rng(5);
  for (Eigen::Index bits : {8, 16, 70}) {
    const SignMatrix db = oracle::RandomSigns(bits, 32, rng);
    const SignMatrix queries = oracle::RandomSigns(bits, 6, rng);
    const PackedCodes pq(queries);
    const PackedCodes pdb(db);
    for (Eigen::Index q = 0; q < queries.cols(); ++q) {
      std::vector<std::size_t> dist;
      const std::vector<std::size_t> order = oracle::Rank(queries, q, db, &dist);
      const amfh::RankedRetrieval r =
          amfh::HammingRank(pq, static_cast<std::size_t>(q), pdb);
      EXPECT_EQ(r.indices, order);
      for (std::size_t i = 0; i < dist.size(); ++i) {
        EXPECT_EQ(r.distances[i], dist[i]);
      }
    }
  }
}

TEST(HammingRank, LengthMismatch) {
  EXPECT_EQ(CodeOf([] {
              amfh::HammingRank(SignMatrix::Ones(8, 1), SignMatrix::Ones(16, 3));
            }),
            ErrorCode::kShape);
}

TEST(AveragePrecision, HandExample) {
  const std::vector<std::uint8_t> rel = {1, 0, 1};
  EXPECT_NEAR(amfh::AveragePrecision(rel, 3), 5.0 / 6.0, 1e-12);
}

TEST(AveragePrecision, AllRelevantAndNoneRelevant) {
  const std::vector<std::uint8_t> ones(9, 1);
  const std::vector<std::uint8_t> zeros(9, 0);
  for (std::size_t r = 1; r <= 9; ++r) {
    EXPECT_EQ(amfh::AveragePrecision(ones, r), 1.0);
    EXPECT_EQ(amfh::AveragePrecision(zeros, r), 0.0);
  }
}

TEST(AveragePrecision, MatchesNaiveOracle) {
  std::mt19937_64 rng(6);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint8_t> rel(40);
    std::vector<int> rel_int(40);
    for (std::size_t i = 0; i < rel.size(); ++i) {
      rel[i] = coin(rng) ? 1 : 0;
      rel_int[i] = rel[i];
    }
    const std::size_t cutoff = 1 + static_cast<std::size_t>(trial % 40);
    EXPECT_NEAR(amfh::AveragePrecision(rel, cutoff),
                oracle::AveragePrecision(rel_int, cutoff), 1e-12);
  }
}

TEST(AveragePrecision, InvalidCutoff) {
  const std::vector<std::uint8_t> rel = {1, 0};
  EXPECT_EQ(CodeOf([&] { amfh::AveragePrecision(rel, 0); }),
            ErrorCode::kInvalidCutoff);
  EXPECT_EQ(CodeOf([&] { amfh::AveragePrecision(rel, 3); }),
            ErrorCode::kInvalidCutoff);
}

TEST(MeanAveragePrecision, PerfectSeparation) {
  SignMatrix codes(4, 3);
  codes << 1, -1, 1, 1, -1, -1, 1, 1, 1, 1, -1, -1;
  const LabelSet labels = LabelSet::FromSingle({0, 1, 2}, 3);
  const amfh::EvalReport rep =
      amfh::MeanAveragePrecision(codes, labels, codes, labels);
  EXPECT_EQ(rep.map, 1.0);
  EXPECT_EQ(rep.num_queries, 3u);
  EXPECT_EQ(rep.cutoff, 3u);
}

TEST(MeanAveragePrecision, MatchesNaiveOracleMultiLabel) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> cls(0, 3);
  std::bernoulli_distribution extra(0.3);
  auto random_labels = [&](std::size_t n) {
    LabelSet set;
    set.num_classes = 4;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<int> l = {cls(rng)};
      if (extra(rng)) {
        const int c = cls(rng);
        if (c != l[0]) l.push_back(c);
      }
      std::sort(l.begin(), l.end());
      set.labels.push_back(l);
    }
    return set;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const SignMatrix q = oracle::RandomSigns(12, 5, rng);
    const SignMatrix db = oracle::RandomSigns(12, 40, rng);
    const LabelSet ql = random_labels(5);
    const LabelSet dbl = random_labels(40);
    for (std::size_t cutoff : {0, 1, 10, 40}) {
      const amfh::EvalReport rep =
          amfh::MeanAveragePrecision(q, ql, db, dbl, cutoff);
      EXPECT_NEAR(rep.map, oracle::MeanAveragePrecision(q, ql, db, dbl, cutoff),
                  1e-12);
      ASSERT_EQ(rep.per_query_ap.size(), 5u);
    }
  }
}

TEST(MeanAveragePrecision, RandomCodesNearHalf) {
  std::mt19937_64 rng(8);
  const SignMatrix q = oracle::RandomSigns(16, 200, rng);
  const SignMatrix db = oracle::RandomSigns(16, 2000, rng);
  std::vector<int> qc(200), dbc(2000);
  for (std::size_t i = 0; i < qc.size(); ++i) qc[i] = static_cast<int>(i % 2);
  for (std::size_t i = 0; i < dbc.size(); ++i) dbc[i] = static_cast<int>(i % 2);
  const amfh::EvalReport rep = amfh::MeanAveragePrecision(
      q, LabelSet::FromSingle(qc, 2), db, LabelSet::FromSingle(dbc, 2));
  EXPECT_NEAR(rep.map, 0.5, 0.05);
}

TEST(MeanAveragePrecision, PrecisionAtK) {
  SignMatrix codes(2, 4);
  codes << 1, 1, -1, -1, 1, 1, -1, -1;
  const LabelSet labels = LabelSet::FromSingle({0, 0, 1, 1}, 2);
  const amfh::EvalReport rep =
      amfh::MeanAveragePrecision(codes, labels, codes, labels, 0, 2);
  EXPECT_EQ(rep.precision_at_k, 1.0);
  EXPECT_EQ(rep.top_k, 2u);
}

TEST(MeanAveragePrecision, Errors) {
  const SignMatrix codes = SignMatrix::Ones(4, 2);
  const LabelSet labels = LabelSet::FromSingle({0, 1}, 2);
  EXPECT_EQ(CodeOf([&] {
              amfh::MeanAveragePrecision(SignMatrix(4, 0), LabelSet{2, {}}, codes,
                                         labels);
            }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] {
              amfh::MeanAveragePrecision(codes, labels, SignMatrix(4, 0),
                                         LabelSet{2, {}});
            }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { amfh::MeanAveragePrecision(codes, labels, codes, labels, 3); }),
            ErrorCode::kInvalidCutoff);
  EXPECT_EQ(CodeOf([&] {
              amfh::MeanAveragePrecision(SignMatrix::Ones(8, 2), labels, codes,
                                         labels);
            }),
            ErrorCode::kShape);
}

TEST(Report, KeyValueContainsMap) {
  const SignMatrix codes = SignMatrix::Ones(4, 2);
  const LabelSet labels = LabelSet::FromSingle({0, 0}, 2);
  const amfh::EvalReport rep =
      amfh::MeanAveragePrecision(codes, labels, codes, labels);
  std::ostringstream kv;
  amfh::WriteReportKeyValue(kv, rep, true);
  EXPECT_NE(kv.str().find("map="), std::string::npos);
  EXPECT_NE(kv.str().find("ap.1="), std::string::npos);
  std::ostringstream text;
  amfh::WriteReportText(text, rep);
  EXPECT_NE(text.str().find("mAP"), std::string::npos);
}

}  // namespace
