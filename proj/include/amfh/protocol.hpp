#ifndef AMFH_PROTOCOL_HPP_
#define AMFH_PROTOCOL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "amfh/centers.hpp"
#include "amfh/encoder.hpp"
#include "amfh/eval.hpp"
#include "amfh/synth.hpp"
#include "amfh/trainer.hpp"

namespace amfh {

struct ProtocolConfig {
  std::size_t code_length = 16;
  std::uint64_t center_seed = 0;
  TrainConfig train;
  EncodeOptions encode;
  std::size_t cutoff = 0;  // 0 = full ranking
};

struct RetrievalRun {
  CenterTable centers;
  TrainedModel model;
  std::vector<EncodeResult> batches;  // one per stream batch
  SignMatrix query_codes;
  SignMatrix db_codes;
  EvalReport report;
};

// Builds centers for the bundle's classes and fits on the training split.
TrainedModel TrainOnBundle(const DatasetBundle& bundle,
                           const ProtocolConfig& config,
                           CenterTable* centers = nullptr);

// Encodes every stream batch with `model` and evaluates query batches
// against retrieval batches.
RetrievalRun EvaluateModel(const DatasetBundle& bundle,
                           const TrainedModel& model,
                           const ProtocolConfig& config, EncodeMode mode);

// Train + encode + evaluate.
RetrievalRun RunRetrieval(const DatasetBundle& bundle,
                          const ProtocolConfig& config, EncodeMode mode);

inline const std::vector<double> kDeltaGrid = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};

struct SweepPoint {
  double delta = 0.0;
  double map = 0.0;
  int iterations = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double map_range = 0.0;  // max - min over the grid
};

inline constexpr double kSweepStabilityBound = 0.05;

SweepResult SweepDelta(const DatasetBundle& bundle, const ProtocolConfig& config,
                       const std::vector<double>& deltas = kDeltaGrid,
                       EncodeMode mode = EncodeMode::kAdaptive);

struct AblationResult {
  double adaptive_map = 0.0;
  double fixed_map = 0.0;
  std::size_t corrupted_batches = 0;
  // Corrupted batches whose corrupted modality got the largest adaptive mu.
  std::size_t corrupted_heaviest = 0;
  std::vector<Vector> adaptive_weights;  // per stream batch
  std::vector<int> corrupted_modality;

  double heaviest_fraction() const {
    return corrupted_batches == 0
               ? 0.0
               : static_cast<double>(corrupted_heaviest) /
                     static_cast<double>(corrupted_batches);
  }
};

AblationResult Ablate(const DatasetBundle& bundle, const ProtocolConfig& config);

// "batch w_0 ... w_{M-1}" per line.
std::string FormatWeightTrace(const std::vector<Vector>& weights);

// Synthetic bundle used by the desk-scale protocol: 4 classes, 200 per
// class, two modalities of dims 32 and 16, half for training, 20-sample
// stream batches.
SynthSpec StandardSynthSpec(double spread = 0.3, std::uint64_t seed = 0);

inline constexpr double kAblationSpread = 1.0;
inline constexpr double kAblationNoiseLevel = 2.0;

// Harder stream for the adaptive-vs-fixed comparison: 10 classes of 80,
// within-class spread kAblationSpread, and additive noise alternating between
// the two modalities batch by batch. On the standard bundle both encoders
// are already perfect.
SynthSpec AblationSynthSpec(std::uint64_t seed = 0,
                            double noise_level = kAblationNoiseLevel);

struct BenchConfig {
  std::uint64_t seed = 0;
  double spread = 0.3;
  double noise_level = kAblationNoiseLevel;
  ProtocolConfig protocol;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the synthetic acceptance protocol. Criteria whose verification needs
// a brute-force oracle report the self-consistency part only.
std::vector<CriterionResult> RunBench(const BenchConfig& config);

}  // namespace amfh

#endif  // AMFH_PROTOCOL_HPP_
