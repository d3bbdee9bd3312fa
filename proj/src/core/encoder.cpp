#include "amfh/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "amfh/kernel.hpp"

namespace amfh {

Eigen::Index QueryBatch::BatchSize() const {
  std::optional<Eigen::Index> size;
  for (const auto& x : features) {
    if (!x) continue;
    if (size && *size != x->cols()) {
      throw Error(ErrorCode::kShape,
                  "present modalities have different batch sizes");
    }
    size = x->cols();
  }
  if (!size) {
    throw Error(ErrorCode::kEmptyBatch, "every modality is missing");
  }
  return *size;
}

std::vector<Matrix> ProjectBatch(const TrainedModel& model,
                                 const QueryBatch& batch) {
  if (batch.features.size() != model.num_modalities()) {
    throw Error(ErrorCode::kShape,
                "batch has " + std::to_string(batch.features.size()) +
                    " modalities, model has " +
                    std::to_string(model.num_modalities()));
  }
  batch.BatchSize();
  std::vector<Matrix> out(batch.features.size());
  for (std::size_t m = 0; m < batch.features.size(); ++m) {
    if (!batch.features[m]) continue;
    const ModalityModel& mod = model.modalities[m];
    out[m] = mod.projection * ApplyKernel(*batch.features[m], mod.anchors);
  }
  return out;
}

namespace {

bool Present(const Matrix& projection) { return projection.size() > 0; }

Vector PresentUniform(const std::vector<Matrix>& projections) {
  Vector w = Vector::Zero(static_cast<Eigen::Index>(projections.size()));
  const auto count = std::count_if(projections.begin(), projections.end(),
                                   [](const Matrix& p) { return Present(p); });
  for (std::size_t m = 0; m < projections.size(); ++m) {
    if (Present(projections[m])) {
      w(static_cast<Eigen::Index>(m)) = 1.0 / static_cast<double>(count);
    }
  }
  return w;
}

double RelativeChange(double previous, double current) {
  const double scale =
      std::max(std::abs(previous), std::numeric_limits<double>::min());
  return std::abs(previous - current) / scale;
}

}  // namespace

SignMatrix FuseProjections(const std::vector<Matrix>& projections,
                           const Vector& weights) {
  Matrix fused;
  for (std::size_t m = 0; m < projections.size(); ++m) {
    if (!Present(projections[m])) continue;
    const double mu = weights(static_cast<Eigen::Index>(m));
    if (!(mu > 0.0)) {
      throw Error(ErrorCode::kDegenerateWeight,
                  "present modality " + std::to_string(m) +
                      " has a non-positive weight");
    }
    if (fused.size() == 0) {
      fused = projections[m] / mu;
    } else {
      fused += projections[m] / mu;
    }
  }
  if (fused.size() == 0) {
    throw Error(ErrorCode::kEmptyBatch, "every modality is missing");
  }
  return SignOf(fused);
}

double EncodingObjective(const SignMatrix& codes,
                         const std::vector<Matrix>& projections,
                         const Vector& weights) {
  const Matrix b = codes.cast<double>();
  double total = 0.0;
  for (std::size_t m = 0; m < projections.size(); ++m) {
    if (!Present(projections[m])) continue;
    const double mu = weights(static_cast<Eigen::Index>(m));
    if (!(mu > 0.0)) {
      throw Error(ErrorCode::kDegenerateWeight,
                  "present modality has a non-positive weight");
    }
    total += (b - projections[m]).squaredNorm() / mu;
  }
  return total;
}

Vector EncodingWeights(const SignMatrix& codes,
                       const std::vector<Matrix>& projections) {
  const Matrix b = codes.cast<double>();
  Vector g = Vector::Zero(static_cast<Eigen::Index>(projections.size()));
  for (std::size_t m = 0; m < projections.size(); ++m) {
    if (!Present(projections[m])) continue;
    g(static_cast<Eigen::Index>(m)) =
        std::max((b - projections[m]).norm(), kResidualFloor);
  }
  return g / g.sum();
}

EncodeResult EncodeAdaptive(const TrainedModel& model, const QueryBatch& batch,
                            const EncodeOptions& options) {
  if (options.max_iters < 1 || !(options.rel_tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid encoding options");
  }
  const std::vector<Matrix> projections = ProjectBatch(model, batch);

  EncodeResult result;
  Vector weights = PresentUniform(projections);
  result.stop = StopReason::kMaxIterations;
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    SignMatrix codes = FuseProjections(projections, weights);
    result.iterations = iter;
    if (iter > 1 && codes == result.codes) {
      // weights were computed from these very codes: joint fixed point.
      result.stop = StopReason::kCodeFixedPoint;
      break;
    }
    result.codes = std::move(codes);

    Vector next = EncodingWeights(result.codes, projections);
    const bool weights_fixed = next == weights;
    weights = std::move(next);
    const double value = EncodingObjective(result.codes, projections, weights);
    const bool settled =
        !result.objective_trace.empty() &&
        RelativeChange(result.objective_trace.back(), value) < options.rel_tol;
    result.objective_trace.push_back(value);
    if (weights_fixed) {
      result.stop = StopReason::kWeightFixedPoint;
      break;
    }
    if (settled) {
      result.stop = StopReason::kObjectiveTolerance;
      break;
    }
  }
  result.dynamic_weights = weights;
  return result;
}

EncodeResult EncodeFixed(const TrainedModel& model, const QueryBatch& batch) {
  const std::vector<Matrix> projections = ProjectBatch(model, batch);
  Vector weights = Vector::Zero(model.weights.size());
  bool all_present = true;
  for (std::size_t m = 0; m < projections.size(); ++m) {
    const auto mi = static_cast<Eigen::Index>(m);
    if (Present(projections[m])) {
      weights(mi) = model.weights(mi);
    } else {
      all_present = false;
    }
  }
  // Full batches keep the stored weights verbatim so codes match
  // FuseEncodeFixed bit for bit.
  if (!all_present) weights /= weights.sum();

  EncodeResult result;
  result.codes = FuseProjections(projections, weights);
  result.dynamic_weights = weights;
  result.iterations = 1;
  result.objective_trace.push_back(
      EncodingObjective(result.codes, projections, weights));
  result.stop = StopReason::kSinglePass;
  return result;
}

EncodeResult Encode(const TrainedModel& model, const QueryBatch& batch,
                    EncodeMode mode, const EncodeOptions& options) {
  return mode == EncodeMode::kAdaptive ? EncodeAdaptive(model, batch, options)
                                       : EncodeFixed(model, batch);
}

std::vector<StreamItem> EncodeStream(const TrainedModel& model,
                                     const std::vector<QueryBatch>& batches,
                                     EncodeMode mode,
                                     const EncodeOptions& options) {
  std::vector<StreamItem> out;
  out.reserve(batches.size());
  for (const QueryBatch& batch : batches) {
    StreamItem item;
    try {
      item.result = Encode(model, batch, mode, options);
    } catch (const Error& e) {
      item.error = e.code();
      item.message = e.what();
    }
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace amfh
