#include "amfh/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amfh {

void TrainConfig::Validate() const {
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must be positive");
  }
  if (max_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  }
  if (!(rel_tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rel_tol must be positive");
  }
  if (num_anchors < 1) {
    throw Error(ErrorCode::kInvalidArgument, "anchor count must be >= 1");
  }
  if (kernel_width < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "kernel width must be >= 0");
  }
}

double ResidualNorm(const Matrix& targets, const Matrix& projection,
                    const Matrix& kernel_features) {
  return (targets - projection * kernel_features).norm();
}

double Objective(const std::vector<Matrix>& projections, const Vector& weights,
                 const std::vector<Matrix>& kernel_features,
                 const Matrix& targets, double delta) {
  const std::size_t m_count = projections.size();
  if (kernel_features.size() != m_count ||
      static_cast<std::size_t>(weights.size()) != m_count) {
    throw Error(ErrorCode::kShape, "objective: modality counts differ");
  }
  double total = 0.0;
  for (std::size_t m = 0; m < m_count; ++m) {
    const double mu = weights(static_cast<Eigen::Index>(m));
    if (!(mu > 0.0)) {
      throw Error(ErrorCode::kDegenerateWeight,
                  "modality weight " + std::to_string(m) + " is not positive");
    }
    const Matrix& w = projections[m];
    const Matrix& phi = kernel_features[m];
    if (w.cols() != phi.rows() || w.rows() != targets.rows() ||
        phi.cols() != targets.cols()) {
      throw Error(ErrorCode::kShape, "objective: inconsistent shapes");
    }
    total += (targets - w * phi).squaredNorm() / mu + delta * w.squaredNorm();
  }
  return total;
}

Matrix UpdateProjection(const Matrix& targets, const Matrix& kernel_features,
                        double weight, double delta) {
  if (!(weight > 0.0)) {
    throw Error(ErrorCode::kDegenerateWeight, "modality weight must be > 0");
  }
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must be positive");
  }
  if (targets.cols() != kernel_features.cols()) {
    throw Error(ErrorCode::kShape, "targets and features differ in samples");
  }
  const double inv_mu = 1.0 / weight;
  const Eigen::Index p = kernel_features.rows();
  Matrix system = inv_mu * (kernel_features * kernel_features.transpose());
  system.diagonal().array() += delta;
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumerical,
                "projection system is not positive definite");
  }
  // W A = (1/mu) H Phi^T with A symmetric  <=>  A W^T = (1/mu) Phi H^T.
  Matrix rhs = inv_mu * (kernel_features * targets.transpose());
  Matrix wt = llt.solve(rhs);
  if (!wt.allFinite() || wt.rows() != p) {
    throw Error(ErrorCode::kNumerical, "projection solve produced non-finite values");
  }
  return wt.transpose();
}

Vector UpdateWeights(const Vector& residual_norms) {
  if (residual_norms.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "no residuals to weight");
  }
  for (Eigen::Index m = 0; m < residual_norms.size(); ++m) {
    if (!(residual_norms(m) >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "residual norms must be >= 0");
    }
  }
  const Vector clamped = residual_norms.cwiseMax(kResidualFloor);
  return clamped / clamped.sum();
}

namespace {

double RelativeChange(double previous, double current) {
  const double scale =
      std::max(std::abs(previous), std::numeric_limits<double>::min());
  return std::abs(previous - current) / scale;
}

}  // namespace

TrainedModel Fit(const std::vector<Matrix>& features, const LabelSet& labels,
                 const CenterTable& centers, const TrainConfig& config) {
  config.Validate();
  if (features.empty()) {
    throw Error(ErrorCode::kShape, "no modalities given");
  }
  const Eigen::Index n = features.front().cols();
  for (const Matrix& x : features) {
    if (x.cols() != n) {
      throw Error(ErrorCode::kShape, "modalities have different sample counts");
    }
  }
  if (n < 2) {
    throw Error(ErrorCode::kInsufficientData, "need at least 2 samples");
  }
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw Error(ErrorCode::kShape, "label count does not match sample count");
  }

  const Matrix targets = AssignTargetCodes(centers, labels).cast<double>();
  const std::size_t m_count = features.size();
  const std::size_t p =
      std::min(config.num_anchors, static_cast<std::size_t>(n));

  TrainedModel model;
  model.delta = config.delta;
  model.code_length = centers.code_length;
  model.seed = config.seed;
  model.center_seed = centers.seed;
  model.modalities.resize(m_count);

  std::vector<Matrix> phis(m_count);
  std::vector<Matrix> projections(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    AnchorSet anchors = SelectAnchors(features[m], p, config.seed,
                                      static_cast<int>(m));
    if (config.kernel_width > 0.0) anchors.kernel_width = config.kernel_width;
    phis[m] = ApplyKernel(features[m], anchors);
    model.modalities[m].anchors = std::move(anchors);
  }

  Vector weights = Vector::Constant(static_cast<Eigen::Index>(m_count),
                                    1.0 / static_cast<double>(m_count));
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    Vector residuals(static_cast<Eigen::Index>(m_count));
    for (std::size_t m = 0; m < m_count; ++m) {
      const auto mi = static_cast<Eigen::Index>(m);
      projections[m] =
          UpdateProjection(targets, phis[m], weights(mi), config.delta);
      residuals(mi) = ResidualNorm(targets, projections[m], phis[m]);
    }
    weights = UpdateWeights(residuals);
    const double value =
        Objective(projections, weights, phis, targets, config.delta);
    model.iterations = iter;
    const bool settled =
        !model.objective_trace.empty() &&
        RelativeChange(model.objective_trace.back(), value) < config.rel_tol;
    model.objective_trace.push_back(value);
    if (settled) {
      model.converged = true;
      break;
    }
  }

  for (std::size_t m = 0; m < m_count; ++m) {
    model.modalities[m].projection = std::move(projections[m]);
  }
  model.weights = weights;
  return model;
}

SignMatrix FuseEncodeFixed(const TrainedModel& model,
                           const std::vector<Matrix>& features) {
  if (features.size() != model.num_modalities()) {
    throw Error(ErrorCode::kShape,
                "expected " + std::to_string(model.num_modalities()) +
                    " modalities, got " + std::to_string(features.size()));
  }
  Matrix fused;
  for (std::size_t m = 0; m < features.size(); ++m) {
    const ModalityModel& mod = model.modalities[m];
    Matrix term = (mod.projection * ApplyKernel(features[m], mod.anchors)) /
                  model.weights(static_cast<Eigen::Index>(m));
    if (m == 0) {
      fused = std::move(term);
    } else {
      if (term.cols() != fused.cols()) {
        throw Error(ErrorCode::kShape, "modalities have different sample counts");
      }
      fused += term;
    }
  }
  return SignOf(fused);
}

}  // namespace amfh
