#include "amfh/common.hpp"

#include <algorithm>

namespace amfh {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidOrder: return "invalid-order";
    case ErrorCode::kInvalidLength: return "invalid-length";
    case ErrorCode::kCenterSeparation: return "center-separation";
    case ErrorCode::kInvalidLabel: return "invalid-label";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kDegenerateWeight: return "degenerate-weight";
    case ErrorCode::kNumerical: return "numerical";
    case ErrorCode::kEmptyBatch: return "empty-batch";
    case ErrorCode::kInvalidCutoff: return "invalid-cutoff";
    case ErrorCode::kCorruptFile: return "corrupt-file";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

SignMatrix SignOf(const Matrix& m) {
  return m.unaryExpr([](double v) { return SignOf(v); });
}

void LabelSet::Validate() const {
  if (num_classes < 1) {
    throw Error(ErrorCode::kInvalidLabel, "label set has no categories");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) {
      throw Error(ErrorCode::kInvalidLabel,
                  "sample " + std::to_string(i) + " has an empty label set");
    }
    for (int c : labels[i]) {
      if (c < 0 || c >= num_classes) {
        throw Error(ErrorCode::kInvalidLabel,
                    "sample " + std::to_string(i) + " has label " +
                        std::to_string(c) + " outside [0, " +
                        std::to_string(num_classes) + ")");
      }
    }
  }
}

LabelSet LabelSet::FromSingle(const std::vector<int>& classes,
                              int num_classes) {
  LabelSet out;
  out.num_classes = num_classes;
  out.labels.reserve(classes.size());
  for (int c : classes) out.labels.push_back({c});
  return out;
}

LabelSet LabelSet::Subset(const std::vector<std::size_t>& indices) const {
  LabelSet out;
  out.num_classes = num_classes;
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= labels.size()) {
      throw Error(ErrorCode::kShape, "label subset index out of range");
    }
    out.labels.push_back(labels[i]);
  }
  return out;
}

bool LabelSet::Intersects(std::size_t i, const LabelSet& other,
                          std::size_t j) const {
  const auto& a = labels[i];
  const auto& b = other.labels[j];
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return true;
    if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return false;
}

}  // namespace amfh
