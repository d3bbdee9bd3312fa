#include "amfh/centers.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <sstream>

namespace amfh {

HadamardMatrix SylvesterHadamard(std::size_t order) {
  if (order == 0 || !std::has_single_bit(order)) {
    throw Error(ErrorCode::kInvalidOrder,
                "Hadamard order must be a power of two, got " +
                    std::to_string(order));
  }
  HadamardMatrix h(1, 1);
  h(0, 0) = 1;
  while (static_cast<std::size_t>(h.rows()) < order) {
    const Eigen::Index m = h.rows();
    HadamardMatrix next(2 * m, 2 * m);
    next.topLeftCorner(m, m) = h;
    next.topRightCorner(m, m) = h;
    next.bottomLeftCorner(m, m) = h;
    next.bottomRightCorner(m, m) = -h;
    h = std::move(next);
  }
  return h;
}

std::size_t RequiredOrder(std::size_t code_length, std::size_t num_categories) {
  return std::bit_ceil(std::max<std::size_t>({code_length, num_categories, 1}));
}

SignMatrix LshReduce(const HadamardMatrix& columns, std::size_t code_length,
                     std::uint64_t seed) {
  if (code_length < 1) {
    throw Error(ErrorCode::kInvalidLength, "LSH code length must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix projection(columns.rows(), static_cast<Eigen::Index>(code_length));
  // Fill column by column so the draw order does not depend on storage order.
  for (Eigen::Index j = 0; j < projection.cols(); ++j) {
    for (Eigen::Index i = 0; i < projection.rows(); ++i) {
      projection(i, j) = gauss(rng);
    }
  }
  return SignOf(projection.transpose() * columns.cast<double>());
}

std::size_t HammingDistance(const SignMatrix& codes, Eigen::Index a,
                            Eigen::Index b) {
  return static_cast<std::size_t>(
      (codes.col(a).array() != codes.col(b).array()).count());
}

CenterAudit AuditCenters(const CenterTable& table) {
  const Eigen::Index k = table.centers.cols();
  const double r = static_cast<double>(table.centers.rows());
  CenterAudit audit;
  audit.threshold = table.exact ? r / 2.0 : kLshSeparationFraction * r;
  if (k < 2) {
    throw Error(ErrorCode::kInvalidArgument, "audit needs at least 2 centers");
  }
  std::size_t total = 0;
  std::size_t minimum = table.centers.rows();
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const std::size_t d = HammingDistance(table.centers, i, j);
      total += d;
      minimum = std::min(minimum, d);
    }
  }
  const auto pairs = static_cast<std::size_t>(k) * (k - 1) / 2;
  audit.average = static_cast<double>(total) / static_cast<double>(pairs);
  audit.minimum = minimum;
  if (table.exact) {
    // average >= r/2  <=>  2 * total >= pairs * r, exact in integers.
    audit.pass = 2 * total >= pairs * table.centers.rows();
  } else {
    audit.pass = audit.average >= audit.threshold;
  }
  return audit;
}

CenterTable BuildCenterTable(std::size_t code_length,
                             std::size_t num_categories, std::uint64_t seed) {
  if (code_length < 1) {
    throw Error(ErrorCode::kInvalidLength, "code length must be >= 1");
  }
  if (num_categories < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "need at least 2 categories to build hash centers");
  }
  CenterTable table;
  table.code_length = code_length;
  table.num_categories = num_categories;
  table.order = RequiredOrder(code_length, num_categories);
  table.seed = seed;

  const HadamardMatrix hadamard = SylvesterHadamard(table.order);
  const HadamardMatrix columns =
      hadamard.leftCols(static_cast<Eigen::Index>(num_categories));

  if (table.order == code_length) {
    table.exact = true;
    table.centers = columns.cast<std::int8_t>();
    return table;
  }

  table.exact = false;
  CenterAudit last;
  for (int attempt = 0; attempt < kLshMaxAttempts; ++attempt) {
    table.seed = seed + static_cast<std::uint64_t>(attempt);
    table.centers = LshReduce(columns, code_length, table.seed);
    last = AuditCenters(table);
    if (last.pass) return table;
  }
  std::ostringstream msg;
  msg << "LSH centers failed separation after " << kLshMaxAttempts
      << " attempts; average distance " << last.average << " < "
      << last.threshold;
  throw Error(ErrorCode::kCenterSeparation, msg.str());
}

SignMatrix AssignTargetCodes(const CenterTable& table, const LabelSet& labels) {
  labels.Validate();
  if (static_cast<std::size_t>(labels.num_classes) > table.num_categories) {
    throw Error(ErrorCode::kInvalidLabel,
                "label universe is larger than the center table");
  }
  const Eigen::Index r = table.centers.rows();
  SignMatrix out(r, static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& set = labels.labels[i];
    const auto col = static_cast<Eigen::Index>(i);
    if (set.size() == 1) {
      out.col(col) = table.centers.col(set.front());
      continue;
    }
    Eigen::VectorXi sum = Eigen::VectorXi::Zero(r);
    for (int c : set) sum += table.centers.col(c).cast<int>();
    // sign(mean) == sign(sum) for a positive member count.
    for (Eigen::Index b = 0; b < r; ++b) out(b, col) = sum(b) < 0 ? -1 : 1;
  }
  return out;
}

}  // namespace amfh
