#ifndef AMFH_TRAINER_HPP_
#define AMFH_TRAINER_HPP_

#include <cstdint>
#include <vector>

#include "amfh/centers.hpp"
#include "amfh/common.hpp"
#include "amfh/kernel.hpp"

namespace amfh {

struct TrainConfig {
  double delta = 1e-3;
  int max_iters = 50;
  double rel_tol = 1e-5;
  std::uint64_t seed = 0;
  // Anchors per modality; clamped to the training sample count.
  std::size_t num_anchors = kDefaultAnchorCount;
  // Overrides the mean-distance kernel width heuristic when > 0.
  double kernel_width = 0.0;

  void Validate() const;
};

struct ModalityModel {
  AnchorSet anchors;
  Matrix projection;  // r x p
};

struct TrainedModel {
  std::vector<ModalityModel> modalities;
  Vector weights;  // training-stage mu, on the simplex
  double delta = 1e-3;
  std::size_t code_length = 0;
  std::uint64_t seed = 0;
  std::uint64_t center_seed = 0;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;

  std::size_t num_modalities() const { return modalities.size(); }
};

// Floor applied to residual norms before the weight update.
inline constexpr double kResidualFloor = 1e-12;

// sum_m (1/mu_m) ||H - W_m Phi_m||_F^2 + delta sum_m ||W_m||_F^2.
// Throws kDegenerateWeight if any mu_m <= 0.
double Objective(const std::vector<Matrix>& projections, const Vector& weights,
                 const std::vector<Matrix>& kernel_features,
                 const Matrix& targets, double delta);

// Closed-form minimizer of the m-th term for fixed mu:
//   W = (1/mu) H Phi^T ((1/mu) Phi Phi^T + delta I)^{-1},
// via a Cholesky solve of the SPD system.
Matrix UpdateProjection(const Matrix& targets, const Matrix& kernel_features,
                        double weight, double delta);

// mu_m = G_m / sum G, with each G clamped below at kResidualFloor.
Vector UpdateWeights(const Vector& residual_norms);

// Alternating optimization of projections and weights. All modalities share
// sample order; each modality draws its own anchors with config.seed.
TrainedModel Fit(const std::vector<Matrix>& features, const LabelSet& labels,
                 const CenterTable& centers, const TrainConfig& config);

// Residual Frobenius norm ||H - W Phi||_F.
double ResidualNorm(const Matrix& targets, const Matrix& projection,
                    const Matrix& kernel_features);

// sgn(sum_m (1/mu_m) W_m phi(X_m)) using the training weights.
SignMatrix FuseEncodeFixed(const TrainedModel& model,
                           const std::vector<Matrix>& features);

}  // namespace amfh

#endif  // AMFH_TRAINER_HPP_
