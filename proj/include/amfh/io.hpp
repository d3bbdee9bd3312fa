#ifndef AMFH_IO_HPP_
#define AMFH_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "amfh/centers.hpp"
#include "amfh/common.hpp"
#include "amfh/trainer.hpp"

namespace amfh::io {

// Every binary file is
//   "AMFH" | u8 kind | u16 version | payload | u32 crc32(all prior bytes)
// with all integers and floats little-endian.
enum class FileKind : std::uint8_t {
  kFeatures = 1,
  kCodes = 2,
  kModel = 3,
  kCenters = 4,
};

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr char kMagic[4] = {'A', 'M', 'F', 'H'};

using Bytes = std::vector<std::uint8_t>;

// Features payload: u64 rows (d), u64 cols (n), row-major f64.
Bytes EncodeFeatures(const Matrix& features);
Matrix DecodeFeatures(std::span<const std::uint8_t> bytes);

// Codes payload: u64 r, u64 n, then per column ceil(r/8) bytes with bit i at
// byte i/8, bit i%8; +1 -> 1, -1 -> 0, padding bits zero.
Bytes EncodeCodes(const SignMatrix& codes);
SignMatrix DecodeCodes(std::span<const std::uint8_t> bytes);

Bytes EncodeModel(const TrainedModel& model);
TrainedModel DecodeModel(std::span<const std::uint8_t> bytes);

// Centers payload: u64 k, u64 r, u64 r*, u64 seed, u8 exact, then the r x k
// centers packed as in the codes payload.
Bytes EncodeCenters(const CenterTable& table);
CenterTable DecodeCenters(std::span<const std::uint8_t> bytes);

// CSV with one sample per row; returns d x n. Lines starting with '#' and a
// non-numeric first line are skipped.
Matrix ParseCsvFeatures(const std::string& text);

// Kind byte of a buffer that starts with the AMFH magic, or 0.
std::uint8_t PeekKind(std::span<const std::uint8_t> bytes);

Bytes ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path,
               std::span<const std::uint8_t> bytes);

void StoreFeatures(const Matrix& features, const std::filesystem::path& path);
// Accepts the binary format or, when the magic is absent, CSV.
Matrix LoadFeatures(const std::filesystem::path& path);

void StoreCodes(const SignMatrix& codes, const std::filesystem::path& path);
SignMatrix LoadCodes(const std::filesystem::path& path);

void StoreModel(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel LoadModel(const std::filesystem::path& path);

void StoreCenters(const CenterTable& table, const std::filesystem::path& path);
CenterTable LoadCenters(const std::filesystem::path& path);

// Label text file: first line "classes <k>", then one line per sample with
// its space-separated category indices.
std::string FormatLabels(const LabelSet& labels);
LabelSet ParseLabels(const std::string& text);
void StoreLabels(const LabelSet& labels, const std::filesystem::path& path);
LabelSet LoadLabels(const std::filesystem::path& path);

}  // namespace amfh::io

#endif  // AMFH_IO_HPP_
