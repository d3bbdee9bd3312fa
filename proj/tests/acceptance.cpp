// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Checks run against the independent oracles in support/.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "amfh/protocol.hpp"
#include "oracles.hpp"

namespace {

using amfh::Matrix;
using amfh::SignMatrix;
using amfh::Vector;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

Outcome HadamardValidity() {
  const auto start = std::chrono::steady_clock::now();
  int tables = 0;
  int bad_pairs = 0;
  for (std::size_t r : {8, 16, 32, 64, 128}) {
    for (std::size_t k : {2, 10, 20, 81}) {
      if (amfh::RequiredOrder(r, k) != r) continue;
      const amfh::CenterTable t = amfh::BuildCenterTable(r, k, 0);
      ++tables;
      for (Eigen::Index a = 0; a < t.centers.cols(); ++a) {
        for (Eigen::Index b = a + 1; b < t.centers.cols(); ++b) {
          if (2 * oracle::Hamming(t.centers, a, t.centers, b) != r) ++bad_pairs;
        }
      }
    }
  }
  const double s = Seconds(start);
  return {bad_pairs == 0 && s < 1.0,
          Format("%d tables, %d pairs off r/2, %.3fs", tables, bad_pairs, s)};
}

Outcome LshRedimensioning() {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t r = 48;
  const std::size_t k = 20;
  double sum = 0.0;
  int failed_audits = 0;
  std::size_t order = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const amfh::CenterTable t = amfh::BuildCenterTable(r, k, seed);
    order = t.order;
    if (!amfh::AuditCenters(t).pass) ++failed_audits;
    double pair_sum = 0.0;
    for (Eigen::Index a = 0; a < t.centers.cols(); ++a) {
      for (Eigen::Index b = a + 1; b < t.centers.cols(); ++b) {
        pair_sum += static_cast<double>(oracle::Hamming(t.centers, a, t.centers, b));
      }
    }
    sum += pair_sum / static_cast<double>(k * (k - 1) / 2);
  }
  const double mean = sum / 20.0;
  const double s = Seconds(start);
  const bool in_band = mean >= 0.45 * r && mean <= 0.55 * r;
  return {in_band && failed_audits == 0 && order == 64 && s < 5.0,
          Format("r*=%zu mean=%.3f band=[%.1f,%.1f] failed_audits=%d %.3fs", order,
                 mean, 0.45 * r, 0.55 * r, failed_audits, s)};
}

Outcome ClosedFormProjection() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> small(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_grad = 0.0;
  double worst_oracle = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int r = small(rng);
    const int p = 1 + static_cast<int>(unit(rng) * 6);
    const int n = 1 + static_cast<int>(unit(rng) * 12);
    const int m_count = 1 + static_cast<int>(unit(rng) * 3);
    const double delta = std::pow(10.0, -3.0 + 2.0 * unit(rng));
    const Matrix h = oracle::RandomSigns(r, n, rng).cast<double>();
    Vector mu(m_count);
    for (int m = 0; m < m_count; ++m) mu(m) = 0.05 + unit(rng);
    mu /= mu.sum();
    for (int m = 0; m < m_count; ++m) {
      const Matrix phi = oracle::Gaussian(p, n, rng).cwiseAbs();
      const Matrix w = amfh::UpdateProjection(h, phi, mu(m), delta);
      const Matrix grad =
          (2.0 / mu(m)) * (w * phi - h) * phi.transpose() + 2.0 * delta * w;
      worst_grad = std::max(worst_grad, grad.cwiseAbs().maxCoeff() / h.norm());
      const Matrix reference = oracle::DescentProjection(h, phi, mu(m), delta);
      worst_oracle = std::max(worst_oracle, (w - reference).norm());
    }
  }
  return {worst_grad < 1e-6 && worst_oracle < 1e-5,
          Format("max |grad|/||H||=%.2e, max ||W-W_descent||=%.2e", worst_grad,
                 worst_oracle)};
}

double WeightedResidual(const std::vector<double>& g, const Vector& mu) {
  double total = 0.0;
  for (std::size_t m = 0; m < g.size(); ++m) {
    total += g[m] * g[m] / mu(static_cast<Eigen::Index>(m));
  }
  return total;
}

Outcome WeightOptimality() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> residual(0.01, 10.0);
  int violations = 0;
  int trials = 0;
  for (int m_count : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> g(static_cast<std::size_t>(m_count));
      for (double& v : g) v = residual(rng);
      const Vector mu =
          amfh::UpdateWeights(Eigen::Map<const Vector>(g.data(), m_count));
      if (WeightedResidual(g, mu) > oracle::SimplexGridMinimum(g, 1e-3)) ++violations;
      ++trials;
    }
  }
  return {violations == 0,
          Format("%d/%d instances beat every grid point", trials - violations, trials)};
}

Outcome GridEquivalence() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> residual(0.1, 5.0);
  double worst = 0.0;
  for (int m_count : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> g(static_cast<std::size_t>(m_count));
      double sum = 0.0;
      for (double& v : g) {
        v = residual(rng);
        sum += v;
      }
      const double grid = oracle::SimplexGridMinimum(g, 1e-3);
      worst = std::max(worst, std::abs(grid - sum * sum) / (sum * sum));
    }
  }
  return {worst < 1e-3, Format("max relative gap=%.2e", worst)};
}

Outcome Convergence() {
  const auto start = std::chrono::steady_clock::now();
  const amfh::DatasetBundle bundle =
      amfh::GenerateSynthetic(amfh::StandardSynthSpec(0.3, 0));
  const amfh::TrainedModel model =
      amfh::TrainOnBundle(bundle, amfh::ProtocolConfig{});
  const double s = Seconds(start);
  bool monotone = true;
  const auto& trace = model.objective_trace;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1]) monotone = false;
  }
  const bool pass = monotone && model.converged && model.iterations <= 10 &&
                    bundle.train.size() == 400 && model.code_length == 16 &&
                    s < 10.0;
  return {pass, Format("n=%zu iterations=%d converged=%d monotone=%d %.3fs",
                       bundle.train.size(), model.iterations, model.converged ? 1 : 0,
                       monotone ? 1 : 0, s)};
}

Outcome EndToEnd() {
  const auto start = std::chrono::steady_clock::now();
  const amfh::ProtocolConfig cfg;
  const double noisy =
      amfh::RunRetrieval(amfh::GenerateSynthetic(amfh::StandardSynthSpec(0.3, 0)), cfg,
                         amfh::EncodeMode::kAdaptive)
          .report.map;
  const double clean =
      amfh::RunRetrieval(amfh::GenerateSynthetic(amfh::StandardSynthSpec(0.0, 0)), cfg,
                         amfh::EncodeMode::kAdaptive)
          .report.map;
  const double s = Seconds(start);
  return {noisy >= 0.95 && clean == 1.0 && s < 30.0,
          Format("mAP(spread 0.3)=%.6f mAP(spread 0)=%.6f %.3fs", noisy, clean, s)};
}

Outcome AblationDirection() {
  const amfh::DatasetBundle bundle =
      amfh::GenerateSynthetic(amfh::AblationSynthSpec(0));
  const amfh::AblationResult a = amfh::Ablate(bundle, amfh::ProtocolConfig{});
  return {a.corrupted_batches > 0 && a.adaptive_map >= a.fixed_map &&
              a.heaviest_fraction() >= 0.9,
          Format("adaptive=%.6f fixed=%.6f corrupted heaviest %zu/%zu",
                 a.adaptive_map, a.fixed_map, a.corrupted_heaviest,
                 a.corrupted_batches)};
}

amfh::TrainedModel RandomModel(Eigen::Index r, const std::vector<Eigen::Index>& dims,
                               Eigen::Index p, std::mt19937_64& rng) {
  amfh::TrainedModel model;
  model.code_length = static_cast<std::size_t>(r);
  for (std::size_t m = 0; m < dims.size(); ++m) {
    amfh::ModalityModel mod;
    mod.anchors.anchors = oracle::Gaussian(dims[m], p, rng);
    mod.anchors.kernel_width = std::sqrt(static_cast<double>(dims[m]));
    mod.anchors.modality_index = static_cast<int>(m);
    mod.projection = oracle::Gaussian(r, p, rng);
    model.modalities.push_back(std::move(mod));
  }
  model.weights = Vector::Constant(static_cast<Eigen::Index>(dims.size()),
                                   1.0 / static_cast<double>(dims.size()));
  return model;
}

Outcome EncodingFixedPoint() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(9);
  int weight_ok = 0;
  int code_ok = 0;
  int minimal = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const amfh::TrainedModel model = RandomModel(8, {6, 4}, 5, rng);
    amfh::QueryBatch batch;
    batch.features = {oracle::Gaussian(6, 3, rng), oracle::Gaussian(4, 3, rng)};
    const amfh::EncodeResult res = amfh::EncodeAdaptive(model, batch);
    const std::vector<Matrix> proj = amfh::ProjectBatch(model, batch);
    if (amfh::FuseProjections(proj, res.dynamic_weights) == res.codes) ++code_ok;
    const Vector mu = amfh::EncodingWeights(res.codes, proj);
    if ((mu - res.dynamic_weights).cwiseAbs().maxCoeff() < 1e-12) ++weight_ok;
    const double best = oracle::ExhaustiveCodeMinimum(proj, res.dynamic_weights);
    const double got = amfh::EncodingObjective(res.codes, proj, res.dynamic_weights);
    if (got <= best * (1.0 + 1e-12)) ++minimal;
  }
  const double s = Seconds(start);
  return {weight_ok == 20 && code_ok == 20 && minimal == 20 && s < 60.0,
          Format("weights %d/20, codes %d/20, exhaustive minimum %d/20, %.3fs",
                 weight_ok, code_ok, minimal, s)};
}

Outcome EvaluatorExactness() {
  const std::vector<std::uint8_t> rel = {1, 0, 1};
  const double ap = amfh::AveragePrecision(rel, 3);
  const bool ap_ok = std::abs(ap - 5.0 / 6.0) < 1e-12;

  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> cls(0, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const SignMatrix q = oracle::RandomSigns(12, 5, rng);
    const SignMatrix db = oracle::RandomSigns(12, 30, rng);
    std::vector<int> qc(5), dbc(30);
    for (int& c : qc) c = cls(rng);
    for (int& c : dbc) c = cls(rng);
    const amfh::LabelSet ql = amfh::LabelSet::FromSingle(qc, 3);
    const amfh::LabelSet dbl = amfh::LabelSet::FromSingle(dbc, 3);
    const std::size_t cutoff = static_cast<std::size_t>(trial % 31);
    const double got = amfh::MeanAveragePrecision(q, ql, db, dbl, cutoff).map;
    worst = std::max(worst,
                     std::abs(got - oracle::MeanAveragePrecision(q, ql, db, dbl, cutoff)));
  }

  const SignMatrix q = oracle::RandomSigns(16, 200, rng);
  const SignMatrix db = oracle::RandomSigns(16, 2000, rng);
  std::vector<int> qc(200), dbc(2000);
  for (std::size_t i = 0; i < qc.size(); ++i) qc[i] = static_cast<int>(i % 2);
  for (std::size_t i = 0; i < dbc.size(); ++i) dbc[i] = static_cast<int>(i % 2);
  const double random_map =
      amfh::MeanAveragePrecision(q, amfh::LabelSet::FromSingle(qc, 2), db,
                                 amfh::LabelSet::FromSingle(dbc, 2))
          .map;
  return {ap_ok && worst < 1e-12 && std::abs(random_map - 0.5) <= 0.05,
          Format("AP=%.15f max|mAP-naive|=%.2e random mAP=%.4f", ap, worst,
                 random_map)};
}

Outcome MissingModality() {
  const amfh::DatasetBundle bundle =
      amfh::GenerateSynthetic(amfh::StandardSynthSpec(0.3, 0));
  const amfh::TrainedModel model =
      amfh::TrainOnBundle(bundle, amfh::ProtocolConfig{});
  const std::vector<Matrix> views = bundle.Select(bundle.query);
  int mismatched = 0;
  int checks = 0;
  for (std::size_t present = 0; present < 2; ++present) {
    const amfh::ModalityModel& mod = model.modalities[present];
    const SignMatrix expected = amfh::SignOf(Matrix(
        mod.projection *
        oracle::Kernel(views[present], mod.anchors.anchors, mod.anchors.kernel_width)));
    amfh::QueryBatch batch;
    batch.features.resize(2);
    batch.features[present] = views[present];
    for (amfh::EncodeMode mode : {amfh::EncodeMode::kAdaptive, amfh::EncodeMode::kFixed}) {
      const amfh::EncodeResult res = amfh::Encode(model, batch, mode);
      mismatched += static_cast<int>((res.codes.array() != expected.array()).count());
      if (res.dynamic_weights(static_cast<Eigen::Index>(1 - present)) != 0.0) {
        ++mismatched;
      }
      ++checks;
    }
  }
  return {mismatched == 0,
          Format("%d encodings, %d mismatched bits or weights", checks, mismatched)};
}

Outcome DeltaSensitivity() {
  const amfh::DatasetBundle bundle =
      amfh::GenerateSynthetic(amfh::StandardSynthSpec(0.3, 0));
  const amfh::SweepResult s = amfh::SweepDelta(bundle, amfh::ProtocolConfig{});
  std::string maps;
  for (const amfh::SweepPoint& p : s.points) maps += Format(" %.4f", p.map);
  return {s.points.size() == amfh::kDeltaGrid.size() && s.map_range < 0.05,
          Format("range=%.6f mAPs:%s", s.map_range, maps.c_str())};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "hadamard-validity", HadamardValidity},
      {2, "lsh-redimensioning", LshRedimensioning},
      {3, "closed-form-projection", ClosedFormProjection},
      {4, "weight-optimality", WeightOptimality},
      {5, "weight-grid-equivalence", GridEquivalence},
      {6, "training-convergence", Convergence},
      {7, "end-to-end-retrieval", EndToEnd},
      {8, "ablation-direction", AblationDirection},
      {9, "encoding-fixed-point", EncodingFixedPoint},
      {10, "evaluator-exactness", EvaluatorExactness},
      {11, "missing-modality", MissingModality},
      {12, "delta-sensitivity", DeltaSensitivity},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::printf("criterion %2d %s %s: %s\n", c.id, out.pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu/%zu passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
