#include "amfh/codes.hpp"

namespace amfh {

PackedCodes::PackedCodes(const SignMatrix& codes)
    : bits_(static_cast<std::size_t>(codes.rows())),
      count_(static_cast<std::size_t>(codes.cols())),
      words_((bits_ + 63) / 64),
      data_(words_ * count_, 0) {
  for (std::size_t j = 0; j < count_; ++j) {
    std::uint64_t* dst = data_.data() + j * words_;
    for (std::size_t i = 0; i < bits_; ++i) {
      if (codes(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0) {
        dst[i / 64] |= std::uint64_t{1} << (i % 64);
      }
    }
  }
}

SignMatrix PackedCodes::Unpack() const {
  SignMatrix out(static_cast<Eigen::Index>(bits_),
                 static_cast<Eigen::Index>(count_));
  for (std::size_t j = 0; j < count_; ++j) {
    const std::uint64_t* src = data_.data() + j * words_;
    for (std::size_t i = 0; i < bits_; ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (src[i / 64] >> (i % 64)) & 1U ? 1 : -1;
    }
  }
  return out;
}

std::size_t PackedCodes::Distance(std::size_t i, const PackedCodes& other,
                                  std::size_t j) const {
  if (bits_ != other.bits_) {
    throw Error(ErrorCode::kShape, "code lengths differ");
  }
  return HammingWords(code(i), other.code(j));
}

}  // namespace amfh
