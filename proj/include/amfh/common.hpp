#ifndef AMFH_COMMON_HPP_
#define AMFH_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace amfh {

// Dense real matrix. Feature matrices are d x n (one column per sample).
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// r x n matrix with entries in {-1, +1}.
using SignMatrix = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

enum class ErrorCode : int {
  kInvalidArgument = 1,
  kInvalidOrder,
  kInvalidLength,
  kCenterSeparation,
  kInvalidLabel,
  kShape,
  kInsufficientData,
  kDegenerateWeight,
  kNumerical,
  kEmptyBatch,
  kInvalidCutoff,
  kCorruptFile,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// sign(0) is +1 everywhere in the toolkit.
inline std::int8_t SignOf(double v) { return v < 0.0 ? -1 : 1; }

SignMatrix SignOf(const Matrix& m);

// Per-sample category sets over k categories. Each set is sorted and unique.
struct LabelSet {
  int num_classes = 0;
  std::vector<std::vector<int>> labels;

  std::size_t size() const { return labels.size(); }

  // Throws kInvalidLabel on an empty set or an index outside [0, k).
  void Validate() const;

  // Builds a single-label set from one class index per sample.
  static LabelSet FromSingle(const std::vector<int>& classes, int num_classes);

  LabelSet Subset(const std::vector<std::size_t>& indices) const;

  bool Intersects(std::size_t i, const LabelSet& other, std::size_t j) const;
};

}  // namespace amfh

#endif  // AMFH_COMMON_HPP_
