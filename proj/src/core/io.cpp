#include "amfh/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace amfh::io {
namespace {

constexpr std::size_t kHeaderSize = 7;   // magic + kind + version
constexpr std::size_t kTrailerSize = 4;  // crc32

std::uint32_t Crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const std::size_t chunk =
        std::min<std::size_t>(bytes.size() - offset, 1U << 30);
    crc = crc32(crc, bytes.data() + offset, static_cast<uInt>(chunk));
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

class Writer {
 public:
  explicit Writer(FileKind kind) {
    bytes_.insert(bytes_.end(), kMagic, kMagic + 4);
    U8(static_cast<std::uint8_t>(kind));
    U16(kFormatVersion);
  }

  void U8(std::uint8_t v) { bytes_.push_back(v); }
  void U16(std::uint16_t v) { Le(v, 2); }
  void U32(std::uint32_t v) { Le(v, 4); }
  void U64(std::uint64_t v) { Le(v, 8); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }

  // Row-major dump of a column-major matrix.
  void RowMajor(const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) F64(m(i, j));
    }
  }

  void PackedColumns(const SignMatrix& codes) {
    const auto r = static_cast<std::size_t>(codes.rows());
    const std::size_t stride = (r + 7) / 8;
    for (Eigen::Index j = 0; j < codes.cols(); ++j) {
      const std::size_t base = bytes_.size();
      bytes_.resize(base + stride, 0);
      for (std::size_t i = 0; i < r; ++i) {
        if (codes(static_cast<Eigen::Index>(i), j) > 0) {
          bytes_[base + i / 8] |= static_cast<std::uint8_t>(1U << (i % 8));
        }
      }
    }
  }

  Bytes Finish() {
    U32(Crc32(bytes_));
    return std::move(bytes_);
  }

 private:
  void Le(std::uint64_t v, int width) {
    for (int b = 0; b < width; ++b) {
      bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
  }

  Bytes bytes_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, FileKind expected) {
    if (bytes.size() < kHeaderSize + kTrailerSize ||
        std::memcmp(bytes.data(), kMagic, 4) != 0) {
      throw Error(ErrorCode::kCorruptFile, "missing AMFH header");
    }
    const std::size_t body = bytes.size() - kTrailerSize;
    std::uint32_t stored = 0;
    for (int b = 0; b < 4; ++b) {
      stored |= static_cast<std::uint32_t>(bytes[body + b]) << (8 * b);
    }
    if (stored != Crc32(bytes.first(body))) {
      throw Error(ErrorCode::kCorruptFile, "checksum mismatch");
    }
    bytes_ = bytes.first(body);
    pos_ = 4;
    const std::uint8_t kind = U8();
    if (kind != static_cast<std::uint8_t>(expected)) {
      throw Error(ErrorCode::kCorruptFile,
                  "file kind " + std::to_string(kind) + ", expected " +
                      std::to_string(static_cast<int>(expected)));
    }
    const std::uint16_t version = U16();
    if (version != kFormatVersion) {
      throw Error(ErrorCode::kCorruptFile,
                  "unsupported format version " + std::to_string(version));
    }
  }

  std::uint8_t U8() { return static_cast<std::uint8_t>(Le(1)); }
  std::uint16_t U16() { return static_cast<std::uint16_t>(Le(2)); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Le(4)); }
  std::uint64_t U64() { return Le(8); }
  double F64() { return std::bit_cast<double>(U64()); }

  // Checks that `count` items of `width` bytes fit in what is left.
  void Expect(std::uint64_t count, std::uint64_t width) {
    if (width != 0 && count > std::numeric_limits<std::uint64_t>::max() / width) {
      throw Error(ErrorCode::kInvalidArgument, "declared shape overflows");
    }
    if (count * width > Remaining()) {
      throw Error(ErrorCode::kCorruptFile, "payload shorter than declared shape");
    }
  }

  // Product of two declared dimensions, rejecting overflow.
  static std::uint64_t Area(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
      throw Error(ErrorCode::kInvalidArgument, "declared shape overflows");
    }
    return a * b;
  }

  static Eigen::Index Dim(std::uint64_t v) {
    if (v > static_cast<std::uint64_t>(std::numeric_limits<Eigen::Index>::max())) {
      throw Error(ErrorCode::kInvalidArgument, "declared dimension too large");
    }
    return static_cast<Eigen::Index>(v);
  }

  Matrix RowMajor(std::uint64_t rows, std::uint64_t cols) {
    Expect(Area(rows, cols), 8);
    Matrix m(Dim(rows), Dim(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = F64();
    }
    return m;
  }

  SignMatrix PackedColumns(std::uint64_t r, std::uint64_t n) {
    const std::uint64_t stride = (r + 7) / 8;
    Expect(Reader::Area(stride, n), 1);
    SignMatrix codes(Dim(r), Dim(n));
    for (Eigen::Index j = 0; j < codes.cols(); ++j) {
      const std::size_t base = pos_;
      for (std::uint64_t i = 0; i < r; ++i) {
        const bool bit = (bytes_[base + i / 8] >> (i % 8)) & 1U;
        codes(static_cast<Eigen::Index>(i), j) = bit ? 1 : -1;
      }
      pos_ += stride;
    }
    return codes;
  }

  void Done() const {
    if (pos_ != bytes_.size()) {
      throw Error(ErrorCode::kCorruptFile, "trailing bytes after payload");
    }
  }

 private:
  std::size_t Remaining() const { return bytes_.size() - pos_; }

  std::uint64_t Le(int width) {
    if (Remaining() < static_cast<std::size_t>(width)) {
      throw Error(ErrorCode::kCorruptFile, "unexpected end of file");
    }
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) {
      v |= static_cast<std::uint64_t>(bytes_[pos_ + b]) << (8 * b);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool ParseRow(std::string_view line, std::vector<double>& row) {
  row.clear();
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) end = line.size();
    const std::string_view cell = Trim(line.substr(start, end - start));
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
      return false;
    }
    row.push_back(v);
    start = end + 1;
  }
  return true;
}

}  // namespace

Bytes EncodeFeatures(const Matrix& features) {
  Writer w(FileKind::kFeatures);
  w.U64(static_cast<std::uint64_t>(features.rows()));
  w.U64(static_cast<std::uint64_t>(features.cols()));
  w.RowMajor(features);
  return w.Finish();
}

Matrix DecodeFeatures(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, FileKind::kFeatures);
  const std::uint64_t rows = r.U64();
  const std::uint64_t cols = r.U64();
  Matrix m = r.RowMajor(rows, cols);
  r.Done();
  return m;
}

Bytes EncodeCodes(const SignMatrix& codes) {
  Writer w(FileKind::kCodes);
  w.U64(static_cast<std::uint64_t>(codes.rows()));
  w.U64(static_cast<std::uint64_t>(codes.cols()));
  w.PackedColumns(codes);
  return w.Finish();
}

SignMatrix DecodeCodes(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, FileKind::kCodes);
  const std::uint64_t bits = r.U64();
  const std::uint64_t n = r.U64();
  SignMatrix codes = r.PackedColumns(bits, n);
  r.Done();
  return codes;
}

Bytes EncodeModel(const TrainedModel& model) {
  Writer w(FileKind::kModel);
  const std::size_t m_count = model.num_modalities();
  w.U64(m_count);
  w.U64(model.code_length);
  w.F64(model.delta);
  w.U64(model.seed);
  w.U64(model.center_seed);
  for (std::size_t m = 0; m < m_count; ++m) {
    w.F64(model.weights(static_cast<Eigen::Index>(m)));
  }
  w.U32(static_cast<std::uint32_t>(model.iterations));
  w.U8(model.converged ? 1 : 0);
  w.U64(model.objective_trace.size());
  for (double v : model.objective_trace) w.F64(v);
  for (const ModalityModel& mod : model.modalities) {
    const AnchorSet& a = mod.anchors;
    w.U32(static_cast<std::uint32_t>(a.modality_index));
    w.U64(static_cast<std::uint64_t>(a.dim()));
    w.U64(static_cast<std::uint64_t>(a.count()));
    w.F64(a.kernel_width);
    w.U64(a.seed);
    for (std::size_t j = 0; j < static_cast<std::size_t>(a.count()); ++j) {
      w.U64(j < a.source_indices.size() ? a.source_indices[j] : 0);
    }
    w.RowMajor(a.anchors);
    w.RowMajor(mod.projection);
  }
  return w.Finish();
}

TrainedModel DecodeModel(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, FileKind::kModel);
  TrainedModel model;
  const std::uint64_t m_count = r.U64();
  model.code_length = r.U64();
  model.delta = r.F64();
  model.seed = r.U64();
  model.center_seed = r.U64();
  r.Expect(m_count, 8);
  model.weights.resize(Reader::Dim(m_count));
  for (Eigen::Index m = 0; m < model.weights.size(); ++m) {
    model.weights(m) = r.F64();
  }
  model.iterations = static_cast<int>(r.U32());
  model.converged = r.U8() != 0;
  const std::uint64_t trace = r.U64();
  r.Expect(trace, 8);
  model.objective_trace.resize(trace);
  for (double& v : model.objective_trace) v = r.F64();
  model.modalities.resize(m_count);
  for (ModalityModel& mod : model.modalities) {
    AnchorSet& a = mod.anchors;
    a.modality_index = static_cast<int>(r.U32());
    const std::uint64_t d = r.U64();
    const std::uint64_t p = r.U64();
    a.kernel_width = r.F64();
    a.seed = r.U64();
    r.Expect(p, 8);
    a.source_indices.resize(p);
    for (std::size_t& idx : a.source_indices) idx = r.U64();
    a.anchors = r.RowMajor(d, p);
    mod.projection = r.RowMajor(model.code_length, p);
  }
  r.Done();
  return model;
}

Bytes EncodeCenters(const CenterTable& table) {
  Writer w(FileKind::kCenters);
  w.U64(table.num_categories);
  w.U64(table.code_length);
  w.U64(table.order);
  w.U64(table.seed);
  w.U8(table.exact ? 1 : 0);
  w.PackedColumns(table.centers);
  return w.Finish();
}

CenterTable DecodeCenters(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, FileKind::kCenters);
  CenterTable table;
  table.num_categories = r.U64();
  table.code_length = r.U64();
  table.order = r.U64();
  table.seed = r.U64();
  table.exact = r.U8() != 0;
  table.centers = r.PackedColumns(table.code_length, table.num_categories);
  r.Done();
  return table;
}

Matrix ParseCsvFeatures(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::vector<double> row;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = Trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!ParseRow(body, row)) {
      if (first) {  // header
        first = false;
        continue;
      }
      throw Error(ErrorCode::kCorruptFile,
                  "non-numeric CSV cell on line " + std::to_string(line_no));
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::kShape,
                  "CSV line " + std::to_string(line_no) + " has " +
                      std::to_string(row.size()) + " values, expected " +
                      std::to_string(rows.front().size()));
    }
    rows.push_back(row);
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kCorruptFile, "CSV contains no samples");
  }
  Matrix out(static_cast<Eigen::Index>(rows.front().size()),
             static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rows[i][j];
    }
  }
  return out;
}

std::uint8_t PeekKind(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 5 || std::memcmp(bytes.data(), kMagic, 4) != 0) return 0;
  return bytes[4];
}

Bytes ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  Bytes bytes((std::istreambuf_iterator<char>(in)),
              std::istreambuf_iterator<char>());
  return bytes;
}

void WriteFile(const std::filesystem::path& path,
               std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed for " + path.string());
  }
}

void StoreFeatures(const Matrix& features, const std::filesystem::path& path) {
  WriteFile(path, EncodeFeatures(features));
}

Matrix LoadFeatures(const std::filesystem::path& path) {
  const Bytes bytes = ReadFile(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) {
    return DecodeFeatures(bytes);
  }
  return ParseCsvFeatures(std::string(bytes.begin(), bytes.end()));
}

void StoreCodes(const SignMatrix& codes, const std::filesystem::path& path) {
  WriteFile(path, EncodeCodes(codes));
}

SignMatrix LoadCodes(const std::filesystem::path& path) {
  return DecodeCodes(ReadFile(path));
}

void StoreModel(const TrainedModel& model, const std::filesystem::path& path) {
  WriteFile(path, EncodeModel(model));
}

TrainedModel LoadModel(const std::filesystem::path& path) {
  return DecodeModel(ReadFile(path));
}

void StoreCenters(const CenterTable& table, const std::filesystem::path& path) {
  WriteFile(path, EncodeCenters(table));
}

CenterTable LoadCenters(const std::filesystem::path& path) {
  return DecodeCenters(ReadFile(path));
}

std::string FormatLabels(const LabelSet& labels) {
  std::ostringstream out;
  out << "classes " << labels.num_classes << "\n";
  for (const auto& set : labels.labels) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      out << (i ? " " : "") << set[i];
    }
    out << "\n";
  }
  return out.str();
}

LabelSet ParseLabels(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  LabelSet labels;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kCorruptFile, "empty label file");
  }
  {
    std::istringstream head(line);
    std::string tag;
    if (!(head >> tag >> labels.num_classes) || tag != "classes") {
      throw Error(ErrorCode::kCorruptFile,
                  "label file must start with 'classes <k>'");
    }
  }
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::vector<int> set;
    int c = 0;
    while (row >> c) set.push_back(c);
    if (!row.eof()) {
      throw Error(ErrorCode::kCorruptFile, "malformed label line: " + line);
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    labels.labels.push_back(std::move(set));
  }
  labels.Validate();
  return labels;
}

void StoreLabels(const LabelSet& labels, const std::filesystem::path& path) {
  const std::string text = FormatLabels(labels);
  WriteFile(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                            text.size()));
}

LabelSet LoadLabels(const std::filesystem::path& path) {
  const Bytes bytes = ReadFile(path);
  return ParseLabels(std::string(bytes.begin(), bytes.end()));
}

}  // namespace amfh::io
