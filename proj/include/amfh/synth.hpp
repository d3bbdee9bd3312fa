#ifndef AMFH_SYNTH_HPP_
#define AMFH_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "amfh/common.hpp"

namespace amfh {

// Corruption applied to one modality of every sample in a stream batch.
// modality < 0 leaves the batch clean.
struct NoiseEvent {
  int modality = -1;
  double level = 0.0;  // std of the additive Gaussian noise
};

struct SynthSpec {
  int num_classes = 4;
  std::size_t samples_per_class = 200;
  std::vector<std::size_t> modality_dims = {32, 16};
  std::vector<double> spread = {0.3, 0.3};  // within-class std per modality
  double train_fraction = 0.5;
  std::size_t stream_batch_size = 20;
  std::size_t query_every = 5;  // stream batches 0, q, 2q, ... are queries
  std::vector<NoiseEvent> noise_schedule;  // cycled over stream batches
  std::uint64_t seed = 0;

  void Validate() const;
};

// Samples [0, num_train) are the offline training set; the rest arrive as a
// stream of contiguous batches. Whole batches are assigned to the query or
// retrieval side so that batch boundaries survive the split.
struct DatasetBundle {
  std::vector<Matrix> modalities;  // d_m x n each
  LabelSet labels;
  std::vector<std::size_t> train;
  std::vector<std::size_t> query;
  std::vector<std::size_t> retrieval;
  std::vector<std::vector<std::size_t>> stream_batches;
  std::vector<bool> query_batch;        // per stream batch
  std::vector<int> corrupted_modality;  // per stream batch, -1 if clean

  std::size_t size() const { return labels.size(); }
  std::size_t num_modalities() const { return modalities.size(); }

  // Columns `indices` of every modality.
  std::vector<Matrix> Select(const std::vector<std::size_t>& indices) const;

  // Throws unless the split is disjoint, covers every sample, and every
  // modality has the full sample count.
  void Validate() const;
};

// Class prototypes ~ N(0, I) per modality; samples are prototype plus
// spread * N(0, I). Deterministic under spec.seed.
DatasetBundle GenerateSynthetic(const SynthSpec& spec);

// Schedule that corrupts modality 0, then modality 1, alternating per batch.
std::vector<NoiseEvent> AlternatingNoise(int num_modalities, double level);

// Directory layout: modality_<m>.amfh, labels.txt, split.txt, plus the
// per-split views {train,query,retrieval}_m<m>.amfh and *_labels.txt.
void WriteBundle(const DatasetBundle& bundle, const std::filesystem::path& dir);
DatasetBundle ReadBundle(const std::filesystem::path& dir);

}  // namespace amfh

#endif  // AMFH_SYNTH_HPP_
