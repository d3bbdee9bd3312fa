#include "amfh/kernel.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace amfh {

double MeanAnchorDistance(const Matrix& anchors, std::uint64_t seed) {
  const auto p = static_cast<std::size_t>(anchors.cols());
  if (p < 2) return 0.0;
  const std::size_t all_pairs = p * (p - 1) / 2;
  double sum = 0.0;
  if (all_pairs <= kMaxWidthPairs) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        sum += (anchors.col(i) - anchors.col(j)).norm();
      }
    }
    return sum / static_cast<double>(all_pairs);
  }
  // Subsample distinct-index pairs; a separate stream from anchor selection.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> pick(0, p - 1);
  for (std::size_t s = 0; s < kMaxWidthPairs; ++s) {
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    sum += (anchors.col(i) - anchors.col(j)).norm();
  }
  return sum / static_cast<double>(kMaxWidthPairs);
}

AnchorSet SelectAnchors(const Matrix& features, std::size_t p,
                        std::uint64_t seed, int modality_index) {
  const auto n = static_cast<std::size_t>(features.cols());
  if (p < 1) {
    throw Error(ErrorCode::kInvalidArgument, "anchor count must be >= 1");
  }
  if (p > n) {
    throw Error(ErrorCode::kInsufficientData,
                "requested " + std::to_string(p) + " anchors from " +
                    std::to_string(n) + " samples");
  }
  // Partial Fisher-Yates: the first p slots become the sample.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < p; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  order.resize(p);

  AnchorSet set;
  set.seed = seed;
  set.modality_index = modality_index;
  set.source_indices = order;
  set.anchors.resize(features.rows(), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    set.anchors.col(static_cast<Eigen::Index>(j)) =
        features.col(static_cast<Eigen::Index>(order[j]));
  }
  const double width = MeanAnchorDistance(set.anchors, seed);
  set.kernel_width = width > 0.0 ? width : 1.0;
  return set;
}

Matrix ApplyKernel(const Matrix& features, const AnchorSet& anchors) {
  if (features.rows() != anchors.dim()) {
    throw Error(ErrorCode::kShape,
                "feature dimension " + std::to_string(features.rows()) +
                    " does not match anchor dimension " +
                    std::to_string(anchors.dim()));
  }
  if (!(anchors.kernel_width > 0.0) || !std::isfinite(anchors.kernel_width)) {
    throw Error(ErrorCode::kInvalidArgument,
                "anchor set has a non-positive kernel width");
  }
  const double scale = -1.0 / (2.0 * anchors.kernel_width * anchors.kernel_width);
  Matrix out(anchors.count(), features.cols());
  for (Eigen::Index i = 0; i < features.cols(); ++i) {
    for (Eigen::Index j = 0; j < anchors.count(); ++j) {
      out(j, i) = std::exp(
          scale * (features.col(i) - anchors.anchors.col(j)).squaredNorm());
    }
  }
  return out;
}

}  // namespace amfh
