#ifndef AMFH_CODES_HPP_
#define AMFH_CODES_HPP_

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "amfh/common.hpp"

namespace amfh {

// Bit-packed binary codes, one code per column. Bit i of a code is set when
// entry i is +1. Codes are padded to whole 64-bit words with zero bits.
class PackedCodes {
 public:
  PackedCodes() = default;
  explicit PackedCodes(const SignMatrix& codes);

  std::size_t bits() const { return bits_; }
  std::size_t size() const { return count_; }
  std::size_t words_per_code() const { return words_; }

  std::span<const std::uint64_t> code(std::size_t j) const {
    return {data_.data() + j * words_, words_};
  }

  SignMatrix Unpack() const;

  // Number of differing bits between code i of this and code j of other.
  std::size_t Distance(std::size_t i, const PackedCodes& other,
                       std::size_t j) const;

 private:
  std::size_t bits_ = 0;
  std::size_t count_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

inline std::size_t HammingWords(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b) {
  std::size_t d = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    d += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
  }
  return d;
}

}  // namespace amfh

#endif  // AMFH_CODES_HPP_
