#ifndef AMFH_ENCODER_HPP_
#define AMFH_ENCODER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "amfh/common.hpp"
#include "amfh/trainer.hpp"

namespace amfh {

// One arriving batch. A disengaged entry marks that modality as missing for
// the whole batch.
struct QueryBatch {
  std::vector<std::optional<Matrix>> features;

  // Number of columns shared by the present modalities; throws kEmptyBatch
  // when no modality is present and kShape when counts disagree.
  Eigen::Index BatchSize() const;
};

enum class EncodeMode { kAdaptive, kFixed };

enum class StopReason {
  kCodeFixedPoint,  // B unchanged between iterations
  kWeightFixedPoint,  // mu unchanged by the weight step
  kObjectiveTolerance,
  kMaxIterations,
  kSinglePass,  // fixed mode
};

struct EncodeResult {
  SignMatrix codes;         // r x n_q
  Vector dynamic_weights;   // length M, zero for missing modalities
  int iterations = 0;       // number of code updates
  std::vector<double> objective_trace;  // after each weight update
  StopReason stop = StopReason::kMaxIterations;
};

struct EncodeOptions {
  int max_iters = 30;
  double rel_tol = 1e-5;
};

// W_m phi(X_m) for every present modality, in modality order. Missing
// modalities yield an empty matrix.
std::vector<Matrix> ProjectBatch(const TrainedModel& model,
                                 const QueryBatch& batch);

// sgn(sum over present m of P_m / mu_m); mu entries of missing modalities
// are ignored.
SignMatrix FuseProjections(const std::vector<Matrix>& projections,
                           const Vector& weights);

// sum over present m of (1/mu_m) ||B - P_m||_F^2.
double EncodingObjective(const SignMatrix& codes,
                         const std::vector<Matrix>& projections,
                         const Vector& weights);

// mu_m = G_m / sum G over present modalities with G_m = ||B - P_m||_F
// (floored at kResidualFloor); zero for missing ones.
Vector EncodingWeights(const SignMatrix& codes,
                       const std::vector<Matrix>& projections);

// Alternates the code step and the weight step starting from uniform weights
// over the present modalities.
EncodeResult EncodeAdaptive(const TrainedModel& model, const QueryBatch& batch,
                            const EncodeOptions& options = {});

// One code step with the training weights restricted to the present
// modalities and renormalized.
EncodeResult EncodeFixed(const TrainedModel& model, const QueryBatch& batch);

EncodeResult Encode(const TrainedModel& model, const QueryBatch& batch,
                    EncodeMode mode, const EncodeOptions& options = {});

struct StreamItem {
  std::optional<EncodeResult> result;
  ErrorCode error = ErrorCode::kInvalidArgument;
  std::string message;  // empty on success

  bool ok() const { return result.has_value(); }
};

// Encodes each batch independently in arrival order. A failing batch is
// reported in its slot and the stream continues.
std::vector<StreamItem> EncodeStream(const TrainedModel& model,
                                     const std::vector<QueryBatch>& batches,
                                     EncodeMode mode,
                                     const EncodeOptions& options = {});

}  // namespace amfh

#endif  // AMFH_ENCODER_HPP_
