#ifndef AMFH_CENTERS_HPP_
#define AMFH_CENTERS_HPP_

#include <cstdint>

#include "amfh/common.hpp"

namespace amfh {

// Square +-1 matrix of power-of-two order. Integer entries so that
// orthogonality can be checked exactly.
using HadamardMatrix = Eigen::MatrixXi;

// Canonical Sylvester construction: H_1 = [1], H_2m = [[H, H], [H, -H]].
// Throws kInvalidOrder unless order is a positive power of two.
HadamardMatrix SylvesterHadamard(std::size_t order);

// Smallest power of two that is >= both the code length and the class count.
std::size_t RequiredOrder(std::size_t code_length, std::size_t num_categories);

// Gaussian sign projection of the columns of `columns` (order x c) down (or
// up) to `code_length` bits: column i becomes sign(W^T c_i) with W drawn
// i.i.d. N(0, 1) from `seed`, shape order x code_length.
SignMatrix LshReduce(const HadamardMatrix& columns, std::size_t code_length,
                     std::uint64_t seed);

struct CenterTable {
  std::size_t code_length = 0;     // r
  std::size_t num_categories = 0;  // k
  std::size_t order = 0;           // r*
  std::uint64_t seed = 0;          // seed that produced the accepted table
  bool exact = true;               // false when the LSH step was applied
  SignMatrix centers;              // r x k, column j is the center of class j
};

struct CenterAudit {
  double average = 0.0;  // mean Hamming distance over unordered pairs
  std::size_t minimum = 0;
  double threshold = 0.0;
  bool pass = false;
};

// Minimum average pairwise distance accepted after the LSH step, as a
// fraction of the code length.
inline constexpr double kLshSeparationFraction = 0.45;
inline constexpr int kLshMaxAttempts = 16;

CenterAudit AuditCenters(const CenterTable& table);

// Takes the first k Sylvester columns of order RequiredOrder(r, k); applies
// LshReduce when r != r*, retrying with seed+1, seed+2, ... until the audit
// passes. Throws kCenterSeparation after kLshMaxAttempts failures.
CenterTable BuildCenterTable(std::size_t code_length,
                             std::size_t num_categories, std::uint64_t seed);

// Target code per sample: the class center for single-label samples, the
// per-bit sign of the mean of the member centers otherwise (ties -> +1).
SignMatrix AssignTargetCodes(const CenterTable& table, const LabelSet& labels);

std::size_t HammingDistance(const SignMatrix& codes, Eigen::Index a,
                            Eigen::Index b);

}  // namespace amfh

#endif  // AMFH_CENTERS_HPP_
