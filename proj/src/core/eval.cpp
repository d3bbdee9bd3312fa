#include "amfh/eval.hpp"

#include <iomanip>
#include <ostream>

namespace amfh {

RankedRetrieval HammingRank(const PackedCodes& queries, std::size_t query,
                            const PackedCodes& database) {
  if (queries.bits() != database.bits()) {
    throw Error(ErrorCode::kShape,
                "query code length " + std::to_string(queries.bits()) +
                    " differs from database code length " +
                    std::to_string(database.bits()));
  }
  if (query >= queries.size()) {
    throw Error(ErrorCode::kShape, "query index out of range");
  }
  const std::size_t n = database.size();
  const std::size_t r = database.bits();
  std::vector<std::uint32_t> dist(n);
  const auto q = queries.code(query);
  for (std::size_t j = 0; j < n; ++j) {
    dist[j] = static_cast<std::uint32_t>(HammingWords(q, database.code(j)));
  }
  // Counting sort over distances 0..r is stable, which gives the ascending
  // index tie-break for free.
  std::vector<std::size_t> start(r + 2, 0);
  for (std::uint32_t d : dist) ++start[d + 1];
  for (std::size_t d = 1; d < start.size(); ++d) start[d] += start[d - 1];
  RankedRetrieval out;
  out.indices.resize(n);
  out.distances.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t slot = start[dist[j]]++;
    out.indices[slot] = j;
    out.distances[slot] = dist[j];
  }
  return out;
}

RankedRetrieval HammingRank(const SignMatrix& query_code,
                            const SignMatrix& database) {
  if (query_code.cols() != 1) {
    throw Error(ErrorCode::kShape, "query must be a single code");
  }
  return HammingRank(PackedCodes(query_code), 0, PackedCodes(database));
}

double AveragePrecision(std::span<const std::uint8_t> relevance,
                        std::size_t cutoff) {
  if (cutoff < 1) {
    throw Error(ErrorCode::kInvalidCutoff, "cutoff must be >= 1");
  }
  if (cutoff > relevance.size()) {
    throw Error(ErrorCode::kInvalidCutoff,
                "cutoff " + std::to_string(cutoff) + " exceeds ranking length " +
                    std::to_string(relevance.size()));
  }
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t m = 0; m < cutoff; ++m) {
    if (relevance[m]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(m + 1);
    }
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

double PrecisionAtK(std::span<const std::uint8_t> relevance, std::size_t k) {
  if (k < 1 || k > relevance.size()) {
    throw Error(ErrorCode::kInvalidCutoff, "precision cutoff out of range");
  }
  std::size_t hits = 0;
  for (std::size_t m = 0; m < k; ++m) hits += relevance[m] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(k);
}

EvalReport MeanAveragePrecision(const SignMatrix& query_codes,
                                const LabelSet& query_labels,
                                const SignMatrix& db_codes,
                                const LabelSet& db_labels, std::size_t cutoff,
                                std::size_t top_k) {
  const auto nq = static_cast<std::size_t>(query_codes.cols());
  const auto nd = static_cast<std::size_t>(db_codes.cols());
  if (nq == 0 || nd == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty query or database set");
  }
  if (query_labels.size() != nq || db_labels.size() != nd) {
    throw Error(ErrorCode::kShape, "label counts do not match code counts");
  }
  if (query_labels.num_classes != db_labels.num_classes) {
    throw Error(ErrorCode::kInvalidLabel, "label universes differ");
  }
  if (cutoff == 0) cutoff = nd;
  if (cutoff > nd) {
    throw Error(ErrorCode::kInvalidCutoff,
                "cutoff exceeds database size " + std::to_string(nd));
  }
  if (top_k > nd) {
    throw Error(ErrorCode::kInvalidCutoff, "top-k exceeds database size");
  }

  const PackedCodes queries(query_codes);
  const PackedCodes database(db_codes);
  EvalReport report;
  report.cutoff = cutoff;
  report.top_k = top_k;
  report.num_queries = nq;
  report.per_query_ap.resize(nq);
  std::vector<std::uint8_t> relevance(nd);
  double precision_sum = 0.0;
  for (std::size_t i = 0; i < nq; ++i) {
    const RankedRetrieval ranked = HammingRank(queries, i, database);
    for (std::size_t m = 0; m < nd; ++m) {
      relevance[m] = query_labels.Intersects(i, db_labels, ranked.indices[m]);
    }
    report.per_query_ap[i] = AveragePrecision(relevance, cutoff);
    if (top_k > 0) precision_sum += PrecisionAtK(relevance, top_k);
  }
  double sum = 0.0;
  for (double ap : report.per_query_ap) sum += ap;
  report.map = sum / static_cast<double>(nq);
  if (top_k > 0) report.precision_at_k = precision_sum / static_cast<double>(nq);
  return report;
}

void WriteReportText(std::ostream& out, const EvalReport& report) {
  out << std::fixed << std::setprecision(6);
  out << "queries   " << report.num_queries << "\n";
  out << "cutoff    " << report.cutoff << "\n";
  out << "mAP       " << report.map << "\n";
  if (report.top_k > 0) {
    out << "P@" << std::left << std::setw(7) << report.top_k << " "
        << report.precision_at_k << "\n";
  }
  out.unsetf(std::ios::floatfield);
}

void WriteReportKeyValue(std::ostream& out, const EvalReport& report,
                         bool per_query) {
  out << std::setprecision(17);
  out << "map=" << report.map << "\n";
  out << "cutoff=" << report.cutoff << "\n";
  out << "num_queries=" << report.num_queries << "\n";
  if (report.top_k > 0) {
    out << "top_k=" << report.top_k << "\n";
    out << "precision_at_k=" << report.precision_at_k << "\n";
  }
  if (per_query) {
    for (std::size_t i = 0; i < report.per_query_ap.size(); ++i) {
      out << "ap." << i << "=" << report.per_query_ap[i] << "\n";
    }
  }
}

}  // namespace amfh
