#ifndef AMFH_KERNEL_HPP_
#define AMFH_KERNEL_HPP_

#include <cstdint>
#include <vector>

#include "amfh/common.hpp"

namespace amfh {

// Anchor points for the Gaussian feature map of one modality.
struct AnchorSet {
  Matrix anchors;  // d x p, columns are training samples
  double kernel_width = 1.0;
  int modality_index = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> source_indices;  // training columns picked

  Eigen::Index dim() const { return anchors.rows(); }
  Eigen::Index count() const { return anchors.cols(); }
};

inline constexpr std::size_t kDefaultAnchorCount = 1000;
inline constexpr std::size_t kMaxWidthPairs = 2000;

// Draws p distinct training columns uniformly without replacement. The
// kernel width defaults to the mean pairwise Euclidean distance among the
// anchors (over at most kMaxWidthPairs seeded random pairs), falling back to
// 1.0 when that mean is zero.
AnchorSet SelectAnchors(const Matrix& features, std::size_t p,
                        std::uint64_t seed, int modality_index = 0);

// Mean pairwise Euclidean distance among anchor columns.
double MeanAnchorDistance(const Matrix& anchors, std::uint64_t seed);

// p x n matrix with entry (j, i) = exp(-||x_i - a_j||^2 / (2 sigma^2)).
Matrix ApplyKernel(const Matrix& features, const AnchorSet& anchors);

}  // namespace amfh

#endif  // AMFH_KERNEL_HPP_
