#ifndef AMFH_EVAL_HPP_
#define AMFH_EVAL_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "amfh/codes.hpp"
#include "amfh/common.hpp"

namespace amfh {

struct RankedRetrieval {
  std::vector<std::size_t> indices;    // database indices, best first
  std::vector<std::uint32_t> distances;  // non-decreasing
};

// Ranks every database code by Hamming distance to query code `query`.
// Ties are broken by ascending database index.
RankedRetrieval HammingRank(const PackedCodes& queries, std::size_t query,
                            const PackedCodes& database);

RankedRetrieval HammingRank(const SignMatrix& query_code,
                            const SignMatrix& database);

// AP over the top `cutoff` ranks of a binary relevance vector:
//   (1 / l) sum_{m <= R} P(m) rel(m),   l = relevant count in the top R.
// Returns 0 when nothing relevant appears. Throws kInvalidCutoff if
// cutoff < 1 or exceeds the ranking length.
double AveragePrecision(std::span<const std::uint8_t> relevance,
                        std::size_t cutoff);

double PrecisionAtK(std::span<const std::uint8_t> relevance, std::size_t k);

struct EvalReport {
  double map = 0.0;
  std::vector<double> per_query_ap;
  std::size_t cutoff = 0;
  std::size_t num_queries = 0;
  double precision_at_k = 0.0;  // mean precision over the top `top_k`
  std::size_t top_k = 0;
};

// Relevance: database item j is a true neighbor of query i iff their label
// sets intersect. cutoff == 0 means the full database.
EvalReport MeanAveragePrecision(const SignMatrix& query_codes,
                                const LabelSet& query_labels,
                                const SignMatrix& db_codes,
                                const LabelSet& db_labels,
                                std::size_t cutoff = 0, std::size_t top_k = 0);

void WriteReportText(std::ostream& out, const EvalReport& report);
void WriteReportKeyValue(std::ostream& out, const EvalReport& report,
                         bool per_query = false);

}  // namespace amfh

#endif  // AMFH_EVAL_HPP_
