#include "amfh/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "amfh/io.hpp"

namespace amfh {

void SynthSpec::Validate() const {
  if (num_classes < 2) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic data needs k >= 2");
  }
  if (samples_per_class < 1) {
    throw Error(ErrorCode::kInvalidArgument, "samples_per_class must be >= 1");
  }
  if (modality_dims.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one modality");
  }
  for (std::size_t d : modality_dims) {
    if (d < 1) {
      throw Error(ErrorCode::kInvalidArgument, "modality dims must be >= 1");
    }
  }
  if (spread.size() != modality_dims.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need one spread value per modality");
  }
  for (double s : spread) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidArgument, "spread must be finite and >= 0");
    }
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train_fraction must be in (0, 1)");
  }
  if (stream_batch_size < 1 || query_every < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "stream batch size and query interval must be >= 1");
  }
  for (const NoiseEvent& e : noise_schedule) {
    if (e.modality >= static_cast<int>(modality_dims.size()) ||
        !(e.level >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "invalid noise event");
    }
  }
  const std::size_t n = samples_per_class * static_cast<std::size_t>(num_classes);
  const auto train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  if (train < 2 || train >= n) {
    throw Error(ErrorCode::kInvalidArgument,
                "split leaves too few training or stream samples");
  }
}

std::vector<Matrix> DatasetBundle::Select(
    const std::vector<std::size_t>& indices) const {
  std::vector<Matrix> out;
  out.reserve(modalities.size());
  for (const Matrix& x : modalities) {
    Matrix sub(x.rows(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
      if (indices[j] >= static_cast<std::size_t>(x.cols())) {
        throw Error(ErrorCode::kShape, "sample index out of range");
      }
      sub.col(static_cast<Eigen::Index>(j)) =
          x.col(static_cast<Eigen::Index>(indices[j]));
    }
    out.push_back(std::move(sub));
  }
  return out;
}

void DatasetBundle::Validate() const {
  const std::size_t n = size();
  for (const Matrix& x : modalities) {
    if (static_cast<std::size_t>(x.cols()) != n) {
      throw Error(ErrorCode::kShape, "modality sample count differs from labels");
    }
  }
  std::vector<int> seen(n, 0);
  for (const auto* part : {&train, &query, &retrieval}) {
    for (std::size_t i : *part) {
      if (i >= n) throw Error(ErrorCode::kShape, "split index out of range");
      ++seen[i];
    }
  }
  for (int s : seen) {
    if (s != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "split lists must be disjoint and cover every sample");
    }
  }
  labels.Validate();
}

std::vector<NoiseEvent> AlternatingNoise(int num_modalities, double level) {
  std::vector<NoiseEvent> schedule;
  for (int m = 0; m < num_modalities; ++m) schedule.push_back({m, level});
  return schedule;
}

DatasetBundle GenerateSynthetic(const SynthSpec& spec) {
  spec.Validate();
  const std::size_t k = static_cast<std::size_t>(spec.num_classes);
  const std::size_t n = spec.samples_per_class * k;
  const std::size_t m_count = spec.modality_dims.size();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<int> classes(n);
  for (std::size_t i = 0; i < n; ++i) {
    classes[i] = static_cast<int>(i / spec.samples_per_class);
  }
  for (std::size_t i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(classes[i], classes[pick(rng)]);
  }

  DatasetBundle bundle;
  bundle.labels = LabelSet::FromSingle(classes, spec.num_classes);
  bundle.modalities.resize(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    const auto d = static_cast<Eigen::Index>(spec.modality_dims[m]);
    Matrix prototypes(d, static_cast<Eigen::Index>(k));
    for (Eigen::Index c = 0; c < prototypes.cols(); ++c) {
      for (Eigen::Index r = 0; r < d; ++r) prototypes(r, c) = gauss(rng);
    }
    Matrix& x = bundle.modalities[m];
    x.resize(d, static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      for (Eigen::Index r = 0; r < d; ++r) {
        x(r, col) = prototypes(r, classes[i]) + spec.spread[m] * gauss(rng);
      }
    }
  }

  const auto num_train = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(n)));
  bundle.train.resize(num_train);
  std::iota(bundle.train.begin(), bundle.train.end(), std::size_t{0});

  std::size_t batch = 0;
  for (std::size_t start = num_train; start < n;
       start += spec.stream_batch_size, ++batch) {
    const std::size_t end = std::min(n, start + spec.stream_batch_size);
    std::vector<std::size_t> members(end - start);
    std::iota(members.begin(), members.end(), start);
    const bool is_query = batch % spec.query_every == 0;
    auto& side = is_query ? bundle.query : bundle.retrieval;
    side.insert(side.end(), members.begin(), members.end());

    int corrupted = -1;
    if (!spec.noise_schedule.empty()) {
      const NoiseEvent& e =
          spec.noise_schedule[batch % spec.noise_schedule.size()];
      if (e.modality >= 0 && e.level > 0.0) {
        corrupted = e.modality;
        Matrix& x = bundle.modalities[static_cast<std::size_t>(e.modality)];
        for (std::size_t i : members) {
          for (Eigen::Index r = 0; r < x.rows(); ++r) {
            x(r, static_cast<Eigen::Index>(i)) += e.level * gauss(rng);
          }
        }
      }
    }
    bundle.stream_batches.push_back(std::move(members));
    bundle.query_batch.push_back(is_query);
    bundle.corrupted_modality.push_back(corrupted);
  }
  bundle.Validate();
  return bundle;
}

namespace {

void WriteText(const std::filesystem::path& path, const std::string& text) {
  io::WriteFile(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                text.size()));
}

std::string ReadText(const std::filesystem::path& path) {
  const io::Bytes bytes = io::ReadFile(path);
  return std::string(bytes.begin(), bytes.end());
}

void WriteIndexLine(std::ostream& out, const char* tag,
                    const std::vector<std::size_t>& indices) {
  out << tag;
  for (std::size_t i : indices) out << ' ' << i;
  out << '\n';
}

}  // namespace

void WriteBundle(const DatasetBundle& bundle, const std::filesystem::path& dir) {
  bundle.Validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string());

  for (std::size_t m = 0; m < bundle.num_modalities(); ++m) {
    io::StoreFeatures(bundle.modalities[m],
                      dir / ("modality_" + std::to_string(m) + ".amfh"));
  }
  io::StoreLabels(bundle.labels, dir / "labels.txt");

  std::ostringstream split;
  WriteIndexLine(split, "train", bundle.train);
  WriteIndexLine(split, "query", bundle.query);
  WriteIndexLine(split, "retrieval", bundle.retrieval);
  for (std::size_t b = 0; b < bundle.stream_batches.size(); ++b) {
    split << "batch " << (bundle.query_batch[b] ? "query" : "retrieval") << ' '
          << bundle.corrupted_modality[b];
    for (std::size_t i : bundle.stream_batches[b]) split << ' ' << i;
    split << '\n';
  }
  WriteText(dir / "split.txt", split.str());

  const std::pair<const char*, const std::vector<std::size_t>*> parts[] = {
      {"train", &bundle.train},
      {"query", &bundle.query},
      {"retrieval", &bundle.retrieval}};
  for (const auto& [name, indices] : parts) {
    const std::vector<Matrix> views = bundle.Select(*indices);
    for (std::size_t m = 0; m < views.size(); ++m) {
      io::StoreFeatures(views[m], dir / (std::string(name) + "_m" +
                                         std::to_string(m) + ".amfh"));
    }
    io::StoreLabels(bundle.labels.Subset(*indices),
                    dir / (std::string(name) + "_labels.txt"));
  }
}

DatasetBundle ReadBundle(const std::filesystem::path& dir) {
  DatasetBundle bundle;
  for (std::size_t m = 0;; ++m) {
    const auto path = dir / ("modality_" + std::to_string(m) + ".amfh");
    if (!std::filesystem::exists(path)) break;
    bundle.modalities.push_back(io::LoadFeatures(path));
  }
  if (bundle.modalities.empty()) {
    throw Error(ErrorCode::kIo, "no modality files in " + dir.string());
  }
  bundle.labels = io::LoadLabels(dir / "labels.txt");

  std::istringstream split(ReadText(dir / "split.txt"));
  std::string line;
  while (std::getline(split, line)) {
    std::istringstream row(line);
    std::string tag;
    row >> tag;
    std::vector<std::size_t>* target = nullptr;
    if (tag == "train") target = &bundle.train;
    if (tag == "query") target = &bundle.query;
    if (tag == "retrieval") target = &bundle.retrieval;
    if (tag == "batch") {
      std::string side;
      int corrupted = -1;
      if (!(row >> side >> corrupted)) {
        throw Error(ErrorCode::kCorruptFile, "malformed batch line in split.txt");
      }
      bundle.query_batch.push_back(side == "query");
      bundle.corrupted_modality.push_back(corrupted);
      bundle.stream_batches.emplace_back();
      target = &bundle.stream_batches.back();
    }
    if (target == nullptr) {
      if (tag.empty()) continue;
      throw Error(ErrorCode::kCorruptFile, "unknown split.txt entry: " + tag);
    }
    std::size_t i = 0;
    while (row >> i) target->push_back(i);
    if (!row.eof()) {
      throw Error(ErrorCode::kCorruptFile, "malformed index list in split.txt");
    }
  }
  bundle.Validate();
  return bundle;
}

}  // namespace amfh
