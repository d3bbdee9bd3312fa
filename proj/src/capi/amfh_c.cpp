#include "amfh/amfh.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "amfh/centers.hpp"
#include "amfh/codes.hpp"
#include "amfh/encoder.hpp"
#include "amfh/eval.hpp"
#include "amfh/io.hpp"
#include "amfh/protocol.hpp"
#include "amfh/synth.hpp"
#include "amfh/trainer.hpp"

struct amfh_features {
  amfh::Matrix value;
};
struct amfh_labels {
  amfh::LabelSet value;
};
struct amfh_codes {
  amfh::SignMatrix value;
};
struct amfh_centers {
  amfh::CenterTable value;
};
struct amfh_model {
  amfh::TrainedModel value;
};
struct amfh_dataset {
  amfh::DatasetBundle value;
};
struct amfh_eval_report {
  amfh::EvalReport value;
  std::string text;
};
struct amfh_bench_report {
  std::vector<amfh::CriterionResult> value;
};

namespace {

thread_local std::string last_error;

amfh_status Fail(amfh_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
amfh_status Guard(F&& body) {
  try {
    body();
    return AMFH_OK;
  } catch (const amfh::Error& e) {
    return Fail(static_cast<amfh_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(AMFH_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(AMFH_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(AMFH_ERR_INTERNAL, "unknown exception");
  }
}

void Require(const void* p, const char* what) {
  if (p == nullptr) {
    throw amfh::Error(amfh::ErrorCode::kInvalidArgument,
                      std::string(what) + " is null");
  }
}

void RequireLength(size_t have, size_t need) {
  if (have < need) {
    throw amfh::Error(amfh::ErrorCode::kInvalidArgument,
                      "output buffer holds " + std::to_string(have) +
                          " entries, need " + std::to_string(need));
  }
}

template <typename Handle, typename Value>
void Emit(Handle** out, Value&& value) {
  Require(out, "output handle");
  *out = new Handle{std::forward<Value>(value)};
}

amfh::TrainConfig ToTrainConfig(const amfh_train_config& c) {
  amfh::TrainConfig config;
  config.delta = c.delta;
  config.max_iters = c.max_iters;
  config.rel_tol = c.rel_tol;
  config.seed = c.seed;
  config.num_anchors = c.num_anchors;
  config.kernel_width = c.kernel_width;
  return config;
}

amfh::ProtocolConfig ToProtocolConfig(const amfh_protocol_config* c) {
  Require(c, "protocol config");
  amfh::ProtocolConfig config;
  config.code_length = c->code_length;
  config.center_seed = c->center_seed;
  config.train = ToTrainConfig(c->train);
  config.encode.max_iters = c->encode_max_iters;
  config.encode.rel_tol = c->encode_rel_tol;
  config.cutoff = c->cutoff;
  return config;
}

amfh::EncodeMode ToMode(amfh_encode_mode mode) {
  switch (mode) {
    case AMFH_ENCODE_ADAPTIVE: return amfh::EncodeMode::kAdaptive;
    case AMFH_ENCODE_FIXED: return amfh::EncodeMode::kFixed;
  }
  throw amfh::Error(amfh::ErrorCode::kInvalidArgument, "unknown encode mode");
}

const amfh::CriterionResult& Criterion(const amfh_bench_report* report,
                                       size_t i) {
  return report->value.at(i);
}

}  // namespace

extern "C" {

const char* amfh_version(void) { return "0.1.0"; }

const char* amfh_status_name(amfh_status status) {
  switch (status) {
    case AMFH_OK: return "ok";
    case AMFH_ERR_NULL_HANDLE: return "null-handle";
    case AMFH_ERR_INTERNAL: return "internal";
    default: break;
  }
  if (status >= AMFH_ERR_INVALID_ARGUMENT && status <= AMFH_ERR_IO) {
    return amfh::ErrorCodeName(static_cast<amfh::ErrorCode>(status));
  }
  return "unknown";
}

const char* amfh_last_error(void) { return last_error.c_str(); }

// ---- features --------------------------------------------------------------

amfh_status amfh_features_create(size_t rows, size_t cols,
                                 const double* col_major, amfh_features** out) {
  return Guard([&] {
    if (rows * cols > 0) Require(col_major, "feature data");
    amfh::Matrix m = Eigen::Map<const amfh::Matrix>(
        col_major, static_cast<Eigen::Index>(rows),
        static_cast<Eigen::Index>(cols));
    Emit(out, std::move(m));
  });
}

amfh_status amfh_features_load(const char* path, amfh_features** out) {
  return Guard([&] {
    Require(path, "path");
    Emit(out, amfh::io::LoadFeatures(path));
  });
}

amfh_status amfh_features_store(const amfh_features* features,
                                const char* path) {
  if (features == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "features is null");
  return Guard([&] {
    Require(path, "path");
    amfh::io::StoreFeatures(features->value, path);
  });
}

size_t amfh_features_rows(const amfh_features* features) {
  return features == nullptr ? 0 : static_cast<size_t>(features->value.rows());
}

size_t amfh_features_cols(const amfh_features* features) {
  return features == nullptr ? 0 : static_cast<size_t>(features->value.cols());
}

amfh_status amfh_features_copy(const amfh_features* features, double* col_major,
                               size_t len) {
  if (features == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "features is null");
  return Guard([&] {
    const auto size = static_cast<size_t>(features->value.size());
    RequireLength(len, size);
    if (size > 0) Require(col_major, "output buffer");
    std::copy_n(features->value.data(), size, col_major);
  });
}

amfh_status amfh_features_slice(const amfh_features* features, size_t first,
                                size_t count, amfh_features** out) {
  if (features == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "features is null");
  return Guard([&] {
    const auto cols = static_cast<size_t>(features->value.cols());
    if (first > cols || count > cols - first) {
      throw amfh::Error(amfh::ErrorCode::kShape, "column range out of bounds");
    }
    amfh::Matrix m = features->value.middleCols(
        static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count));
    Emit(out, std::move(m));
  });
}

void amfh_features_free(amfh_features* features) { delete features; }

// ---- labels ----------------------------------------------------------------

amfh_status amfh_labels_create(int num_classes, size_t num_samples,
                               const size_t* offsets, const int32_t* indices,
                               amfh_labels** out) {
  return Guard([&] {
    Require(offsets, "offsets");
    amfh::LabelSet set;
    set.num_classes = num_classes;
    set.labels.resize(num_samples);
    for (size_t i = 0; i < num_samples; ++i) {
      if (offsets[i + 1] < offsets[i]) {
        throw amfh::Error(amfh::ErrorCode::kInvalidArgument,
                          "label offsets must be non-decreasing");
      }
      if (offsets[i + 1] > offsets[i]) Require(indices, "label indices");
      set.labels[i].assign(indices + offsets[i], indices + offsets[i + 1]);
      std::sort(set.labels[i].begin(), set.labels[i].end());
      set.labels[i].erase(
          std::unique(set.labels[i].begin(), set.labels[i].end()),
          set.labels[i].end());
    }
    set.Validate();
    Emit(out, std::move(set));
  });
}

amfh_status amfh_labels_load(const char* path, amfh_labels** out) {
  return Guard([&] {
    Require(path, "path");
    Emit(out, amfh::io::LoadLabels(path));
  });
}

amfh_status amfh_labels_store(const amfh_labels* labels, const char* path) {
  if (labels == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "labels is null");
  return Guard([&] {
    Require(path, "path");
    amfh::io::StoreLabels(labels->value, path);
  });
}

size_t amfh_labels_count(const amfh_labels* labels) {
  return labels == nullptr ? 0 : labels->value.size();
}

int amfh_labels_num_classes(const amfh_labels* labels) {
  return labels == nullptr ? 0 : labels->value.num_classes;
}

amfh_status amfh_labels_slice(const amfh_labels* labels, size_t first,
                              size_t count, amfh_labels** out) {
  if (labels == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "labels is null");
  return Guard([&] {
    const size_t n = labels->value.size();
    if (first > n || count > n - first) {
      throw amfh::Error(amfh::ErrorCode::kShape, "label range out of bounds");
    }
    std::vector<std::size_t> indices(count);
    for (size_t i = 0; i < count; ++i) indices[i] = first + i;
    Emit(out, labels->value.Subset(indices));
  });
}

void amfh_labels_free(amfh_labels* labels) { delete labels; }

// ---- codes -----------------------------------------------------------------

amfh_status amfh_codes_create(size_t bits, size_t count,
                              const int8_t* col_major, amfh_codes** out) {
  return Guard([&] {
    if (bits * count > 0) Require(col_major, "code data");
    amfh::SignMatrix m = Eigen::Map<const amfh::SignMatrix>(
        col_major, static_cast<Eigen::Index>(bits),
        static_cast<Eigen::Index>(count));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      if (m.data()[i] != 1 && m.data()[i] != -1) {
        throw amfh::Error(amfh::ErrorCode::kInvalidArgument,
                          "code entries must be -1 or +1");
      }
    }
    Emit(out, std::move(m));
  });
}

amfh_status amfh_codes_load(const char* path, amfh_codes** out) {
  return Guard([&] {
    Require(path, "path");
    Emit(out, amfh::io::LoadCodes(path));
  });
}

amfh_status amfh_codes_store(const amfh_codes* codes, const char* path) {
  if (codes == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "codes is null");
  return Guard([&] {
    Require(path, "path");
    amfh::io::StoreCodes(codes->value, path);
  });
}

size_t amfh_codes_bits(const amfh_codes* codes) {
  return codes == nullptr ? 0 : static_cast<size_t>(codes->value.rows());
}

size_t amfh_codes_count(const amfh_codes* codes) {
  return codes == nullptr ? 0 : static_cast<size_t>(codes->value.cols());
}

amfh_status amfh_codes_copy(const amfh_codes* codes, int8_t* col_major,
                            size_t len) {
  if (codes == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "codes is null");
  return Guard([&] {
    const auto size = static_cast<size_t>(codes->value.size());
    RequireLength(len, size);
    if (size > 0) Require(col_major, "output buffer");
    std::copy_n(codes->value.data(), size, col_major);
  });
}

amfh_status amfh_codes_distance(const amfh_codes* a, size_t i,
                                const amfh_codes* b, size_t j, size_t* out) {
  if (a == nullptr || b == nullptr) {
    return Fail(AMFH_ERR_NULL_HANDLE, "codes is null");
  }
  return Guard([&] {
    Require(out, "output");
    if (a->value.rows() != b->value.rows()) {
      throw amfh::Error(amfh::ErrorCode::kShape, "code lengths differ");
    }
    if (i >= static_cast<size_t>(a->value.cols()) ||
        j >= static_cast<size_t>(b->value.cols())) {
      throw amfh::Error(amfh::ErrorCode::kShape, "code index out of range");
    }
    *out = static_cast<size_t>(
        (a->value.col(static_cast<Eigen::Index>(i)).array() !=
         b->value.col(static_cast<Eigen::Index>(j)).array())
            .count());
  });
}

void amfh_codes_free(amfh_codes* codes) { delete codes; }

// ---- centers ---------------------------------------------------------------

amfh_status amfh_centers_build(size_t bits, size_t classes, uint64_t seed,
                               amfh_centers** out) {
  return Guard([&] { Emit(out, amfh::BuildCenterTable(bits, classes, seed)); });
}

amfh_status amfh_centers_audit(const amfh_centers* centers,
                               amfh_center_audit* out) {
  if (centers == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "centers is null");
  return Guard([&] {
    Require(out, "output");
    const amfh::CenterAudit audit = amfh::AuditCenters(centers->value);
    out->average = audit.average;
    out->minimum = audit.minimum;
    out->threshold = audit.threshold;
    out->pass = audit.pass ? 1 : 0;
  });
}

size_t amfh_centers_bits(const amfh_centers* centers) {
  return centers == nullptr ? 0 : centers->value.code_length;
}

size_t amfh_centers_classes(const amfh_centers* centers) {
  return centers == nullptr ? 0 : centers->value.num_categories;
}

size_t amfh_centers_order(const amfh_centers* centers) {
  return centers == nullptr ? 0 : centers->value.order;
}

uint64_t amfh_centers_seed(const amfh_centers* centers) {
  return centers == nullptr ? 0 : centers->value.seed;
}

int amfh_centers_exact(const amfh_centers* centers) {
  return centers != nullptr && centers->value.exact ? 1 : 0;
}

amfh_status amfh_centers_codes(const amfh_centers* centers, amfh_codes** out) {
  if (centers == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "centers is null");
  return Guard([&] { Emit(out, amfh::SignMatrix(centers->value.centers)); });
}

amfh_status amfh_centers_assign(const amfh_centers* centers,
                                const amfh_labels* labels, amfh_codes** out) {
  if (centers == nullptr || labels == nullptr) {
    return Fail(AMFH_ERR_NULL_HANDLE, "centers or labels is null");
  }
  return Guard([&] {
    Emit(out, amfh::AssignTargetCodes(centers->value, labels->value));
  });
}

amfh_status amfh_centers_load(const char* path, amfh_centers** out) {
  return Guard([&] {
    Require(path, "path");
    Emit(out, amfh::io::LoadCenters(path));
  });
}

amfh_status amfh_centers_store(const amfh_centers* centers, const char* path) {
  if (centers == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "centers is null");
  return Guard([&] {
    Require(path, "path");
    amfh::io::StoreCenters(centers->value, path);
  });
}

void amfh_centers_free(amfh_centers* centers) { delete centers; }

// ---- training --------------------------------------------------------------

void amfh_train_config_default(amfh_train_config* config) {
  if (config == nullptr) return;
  const amfh::TrainConfig d;
  config->delta = d.delta;
  config->max_iters = d.max_iters;
  config->rel_tol = d.rel_tol;
  config->seed = d.seed;
  config->num_anchors = d.num_anchors;
  config->kernel_width = d.kernel_width;
}

amfh_status amfh_model_fit(const amfh_features* const* modalities,
                           size_t num_modalities, const amfh_labels* labels,
                           const amfh_centers* centers,
                           const amfh_train_config* config, amfh_model** out) {
  if (labels == nullptr || centers == nullptr) {
    return Fail(AMFH_ERR_NULL_HANDLE, "labels or centers is null");
  }
  return Guard([&] {
    Require(modalities, "modality list");
    std::vector<amfh::Matrix> features;
    features.reserve(num_modalities);
    for (size_t m = 0; m < num_modalities; ++m) {
      Require(modalities[m], "training modality");
      features.push_back(modalities[m]->value);
    }
    amfh_train_config defaults;
    amfh_train_config_default(&defaults);
    const amfh::TrainConfig c = ToTrainConfig(config ? *config : defaults);
    Emit(out, amfh::Fit(features, labels->value, centers->value, c));
  });
}

amfh_status amfh_model_load(const char* path, amfh_model** out) {
  return Guard([&] {
    Require(path, "path");
    Emit(out, amfh::io::LoadModel(path));
  });
}

amfh_status amfh_model_store(const amfh_model* model, const char* path) {
  if (model == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "model is null");
  return Guard([&] {
    Require(path, "path");
    amfh::io::StoreModel(model->value, path);
  });
}

size_t amfh_model_num_modalities(const amfh_model* model) {
  return model == nullptr ? 0 : model->value.modalities.size();
}

size_t amfh_model_code_length(const amfh_model* model) {
  return model == nullptr ? 0 : model->value.code_length;
}

int amfh_model_iterations(const amfh_model* model) {
  return model == nullptr ? 0 : model->value.iterations;
}

int amfh_model_converged(const amfh_model* model) {
  return model != nullptr && model->value.converged ? 1 : 0;
}

double amfh_model_delta(const amfh_model* model) {
  return model == nullptr ? 0.0 : model->value.delta;
}

amfh_status amfh_model_weights(const amfh_model* model, double* out,
                               size_t len) {
  if (model == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "model is null");
  return Guard([&] {
    const auto m = static_cast<size_t>(model->value.weights.size());
    RequireLength(len, m);
    Require(out, "output buffer");
    std::copy_n(model->value.weights.data(), m, out);
  });
}

size_t amfh_model_trace_length(const amfh_model* model) {
  return model == nullptr ? 0 : model->value.objective_trace.size();
}

amfh_status amfh_model_trace(const amfh_model* model, double* out,
                             size_t len) {
  if (model == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "model is null");
  return Guard([&] {
    const auto& trace = model->value.objective_trace;
    RequireLength(len, trace.size());
    if (!trace.empty()) Require(out, "output buffer");
    std::copy(trace.begin(), trace.end(), out);
  });
}

void amfh_model_free(amfh_model* model) { delete model; }

// ---- encoding --------------------------------------------------------------

void amfh_encode_options_default(amfh_encode_options* options) {
  if (options == nullptr) return;
  const amfh::EncodeOptions d;
  options->mode = AMFH_ENCODE_ADAPTIVE;
  options->max_iters = d.max_iters;
  options->rel_tol = d.rel_tol;
}

amfh_status amfh_encode(const amfh_model* model,
                        const amfh_features* const* modalities,
                        size_t num_modalities,
                        const amfh_encode_options* options,
                        amfh_codes** codes_out, double* weights_out,
                        int* iterations_out) {
  if (model == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "model is null");
  return Guard([&] {
    Require(modalities, "modality list");
    Require(codes_out, "output handle");
    amfh::QueryBatch batch;
    batch.features.resize(num_modalities);
    for (size_t m = 0; m < num_modalities; ++m) {
      if (modalities[m] != nullptr) batch.features[m] = modalities[m]->value;
    }
    amfh_encode_options o;
    amfh_encode_options_default(&o);
    if (options != nullptr) o = *options;
    amfh::EncodeOptions eo;
    eo.max_iters = o.max_iters;
    eo.rel_tol = o.rel_tol;
    amfh::EncodeResult r =
        amfh::Encode(model->value, batch, ToMode(o.mode), eo);
    if (weights_out != nullptr) {
      std::copy_n(r.dynamic_weights.data(), r.dynamic_weights.size(),
                  weights_out);
    }
    if (iterations_out != nullptr) *iterations_out = r.iterations;
    Emit(codes_out, std::move(r.codes));
  });
}

// ---- retrieval and evaluation ----------------------------------------------

amfh_status amfh_rank(const amfh_codes* queries, size_t query,
                      const amfh_codes* database, size_t k,
                      size_t* indices_out, uint32_t* distances_out) {
  if (queries == nullptr || database == nullptr) {
    return Fail(AMFH_ERR_NULL_HANDLE, "codes is null");
  }
  return Guard([&] {
    if (query >= static_cast<size_t>(queries->value.cols())) {
      throw amfh::Error(amfh::ErrorCode::kShape, "query index out of range");
    }
    if (k > static_cast<size_t>(database->value.cols())) {
      throw amfh::Error(amfh::ErrorCode::kInvalidCutoff,
                        "k exceeds the database size");
    }
    const amfh::RankedRetrieval r = amfh::HammingRank(
        amfh::SignMatrix(queries->value.col(static_cast<Eigen::Index>(query))),
        database->value);
    if (k > 0) Require(indices_out, "index buffer");
    for (size_t i = 0; i < k; ++i) {
      indices_out[i] = r.indices[i];
      if (distances_out != nullptr) distances_out[i] = r.distances[i];
    }
  });
}

amfh_status amfh_average_precision(const uint8_t* relevance, size_t len,
                                   size_t cutoff, double* out) {
  return Guard([&] {
    Require(out, "output");
    if (len > 0) Require(relevance, "relevance");
    *out = amfh::AveragePrecision(std::span(relevance, len), cutoff);
  });
}

amfh_status amfh_evaluate(const amfh_codes* queries,
                          const amfh_labels* query_labels,
                          const amfh_codes* database,
                          const amfh_labels* database_labels, size_t cutoff,
                          size_t top_k, amfh_eval_report** out) {
  if (queries == nullptr || query_labels == nullptr || database == nullptr ||
      database_labels == nullptr) {
    return Fail(AMFH_ERR_NULL_HANDLE, "evaluation input is null");
  }
  return Guard([&] {
    Require(out, "output handle");
    *out = new amfh_eval_report{
        amfh::MeanAveragePrecision(queries->value, query_labels->value,
                                   database->value, database_labels->value,
                                   cutoff, top_k),
        {}};
  });
}

double amfh_eval_report_map(const amfh_eval_report* report) {
  return report == nullptr ? 0.0 : report->value.map;
}

size_t amfh_eval_report_num_queries(const amfh_eval_report* report) {
  return report == nullptr ? 0 : report->value.num_queries;
}

size_t amfh_eval_report_cutoff(const amfh_eval_report* report) {
  return report == nullptr ? 0 : report->value.cutoff;
}

double amfh_eval_report_precision_at_k(const amfh_eval_report* report) {
  return report == nullptr ? 0.0 : report->value.precision_at_k;
}

amfh_status amfh_eval_report_per_query(const amfh_eval_report* report,
                                       double* out, size_t len) {
  if (report == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "report is null");
  return Guard([&] {
    const auto& ap = report->value.per_query_ap;
    RequireLength(len, ap.size());
    if (!ap.empty()) Require(out, "output buffer");
    std::copy(ap.begin(), ap.end(), out);
  });
}

const char* amfh_eval_report_format(amfh_eval_report* report, int key_value,
                                    int per_query) {
  if (report == nullptr) return "";
  std::ostringstream out;
  if (key_value != 0) {
    amfh::WriteReportKeyValue(out, report->value, per_query != 0);
  } else {
    amfh::WriteReportText(out, report->value);
  }
  report->text = out.str();
  return report->text.c_str();
}

void amfh_eval_report_free(amfh_eval_report* report) { delete report; }

// ---- synthetic datasets ----------------------------------------------------

amfh_status amfh_synth_generate(const amfh_synth_spec* spec,
                                amfh_dataset** out) {
  return Guard([&] {
    Require(spec, "spec");
    amfh::SynthSpec s;
    s.num_classes = spec->num_classes;
    s.samples_per_class = spec->samples_per_class;
    if (spec->num_modalities > 0) {
      Require(spec->modality_dims, "modality dims");
      Require(spec->spread, "spread");
    }
    s.modality_dims.assign(spec->modality_dims,
                           spec->modality_dims + spec->num_modalities);
    s.spread.assign(spec->spread, spec->spread + spec->num_modalities);
    s.train_fraction = spec->train_fraction;
    s.stream_batch_size = spec->stream_batch_size;
    s.query_every = spec->query_every;
    if (spec->num_noise_events > 0) {
      Require(spec->noise_modality, "noise modality");
      Require(spec->noise_level, "noise level");
    }
    for (size_t i = 0; i < spec->num_noise_events; ++i) {
      s.noise_schedule.push_back({spec->noise_modality[i], spec->noise_level[i]});
    }
    s.seed = spec->seed;
    Emit(out, amfh::GenerateSynthetic(s));
  });
}

amfh_status amfh_synth_standard(double spread, uint64_t seed,
                                amfh_dataset** out) {
  return Guard([&] {
    Emit(out, amfh::GenerateSynthetic(amfh::StandardSynthSpec(spread, seed)));
  });
}

amfh_status amfh_synth_ablation(uint64_t seed, double noise_level,
                                amfh_dataset** out) {
  return Guard([&] {
    Emit(out,
         amfh::GenerateSynthetic(amfh::AblationSynthSpec(seed, noise_level)));
  });
}

amfh_status amfh_dataset_write(const amfh_dataset* dataset, const char* dir) {
  if (dataset == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "dataset is null");
  return Guard([&] {
    Require(dir, "directory");
    amfh::WriteBundle(dataset->value, dir);
  });
}

amfh_status amfh_dataset_read(const char* dir, amfh_dataset** out) {
  return Guard([&] {
    Require(dir, "directory");
    Emit(out, amfh::ReadBundle(dir));
  });
}

size_t amfh_dataset_size(const amfh_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->value.size();
}

size_t amfh_dataset_num_modalities(const amfh_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->value.num_modalities();
}

size_t amfh_dataset_num_batches(const amfh_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->value.stream_batches.size();
}

size_t amfh_dataset_num_train(const amfh_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->value.train.size();
}

void amfh_dataset_free(amfh_dataset* dataset) { delete dataset; }

// ---- experiment protocol ---------------------------------------------------

void amfh_protocol_config_default(amfh_protocol_config* config) {
  if (config == nullptr) return;
  const amfh::ProtocolConfig d;
  config->code_length = d.code_length;
  config->center_seed = d.center_seed;
  amfh_train_config_default(&config->train);
  config->encode_max_iters = d.encode.max_iters;
  config->encode_rel_tol = d.encode.rel_tol;
  config->cutoff = d.cutoff;
}

amfh_status amfh_run_retrieval(const amfh_dataset* dataset,
                               const amfh_protocol_config* config,
                               amfh_encode_mode mode, double* map_out) {
  if (dataset == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "dataset is null");
  return Guard([&] {
    Require(map_out, "output");
    *map_out = amfh::RunRetrieval(dataset->value, ToProtocolConfig(config),
                                  ToMode(mode))
                   .report.map;
  });
}

amfh_status amfh_sweep_delta(const amfh_dataset* dataset,
                             const amfh_protocol_config* config,
                             const double* deltas, size_t count,
                             double* maps_out, int* iterations_out,
                             double* range_out) {
  if (dataset == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "dataset is null");
  return Guard([&] {
    if (count == 0) {
      throw amfh::Error(amfh::ErrorCode::kInvalidArgument, "empty delta grid");
    }
    Require(deltas, "delta grid");
    Require(maps_out, "map buffer");
    const amfh::SweepResult r =
        amfh::SweepDelta(dataset->value, ToProtocolConfig(config),
                         std::vector<double>(deltas, deltas + count));
    for (size_t i = 0; i < count; ++i) {
      maps_out[i] = r.points[i].map;
      if (iterations_out != nullptr) iterations_out[i] = r.points[i].iterations;
    }
    if (range_out != nullptr) *range_out = r.map_range;
  });
}

amfh_status amfh_ablate(const amfh_dataset* dataset,
                        const amfh_protocol_config* config,
                        amfh_ablation_summary* out, double* weight_trace,
                        size_t trace_len) {
  if (dataset == nullptr) return Fail(AMFH_ERR_NULL_HANDLE, "dataset is null");
  return Guard([&] {
    Require(out, "output");
    const amfh::AblationResult r =
        amfh::Ablate(dataset->value, ToProtocolConfig(config));
    if (weight_trace != nullptr) {
      const size_t m = dataset->value.num_modalities();
      RequireLength(trace_len, r.adaptive_weights.size() * m);
      for (size_t b = 0; b < r.adaptive_weights.size(); ++b) {
        std::copy_n(r.adaptive_weights[b].data(), m, weight_trace + b * m);
      }
    }
    out->adaptive_map = r.adaptive_map;
    out->fixed_map = r.fixed_map;
    out->corrupted_batches = r.corrupted_batches;
    out->corrupted_heaviest = r.corrupted_heaviest;
    out->num_batches = r.adaptive_weights.size();
  });
}

void amfh_bench_config_default(amfh_bench_config* config) {
  if (config == nullptr) return;
  const amfh::BenchConfig d;
  config->seed = d.seed;
  config->spread = d.spread;
  config->noise_level = d.noise_level;
  amfh_protocol_config_default(&config->protocol);
}

amfh_status amfh_bench_run(const amfh_bench_config* config,
                           amfh_bench_report** out) {
  return Guard([&] {
    Require(config, "bench config");
    amfh::BenchConfig c;
    c.seed = config->seed;
    c.spread = config->spread;
    c.noise_level = config->noise_level;
    c.protocol = ToProtocolConfig(&config->protocol);
    Emit(out, amfh::RunBench(c));
  });
}

size_t amfh_bench_report_count(const amfh_bench_report* report) {
  return report == nullptr ? 0 : report->value.size();
}

int amfh_bench_report_id(const amfh_bench_report* report, size_t i) {
  if (report == nullptr || i >= report->value.size()) return 0;
  return Criterion(report, i).id;
}

const char* amfh_bench_report_name(const amfh_bench_report* report, size_t i) {
  if (report == nullptr || i >= report->value.size()) return "";
  return Criterion(report, i).name.c_str();
}

int amfh_bench_report_passed(const amfh_bench_report* report, size_t i) {
  if (report == nullptr || i >= report->value.size()) return 0;
  return Criterion(report, i).passed ? 1 : 0;
}

const char* amfh_bench_report_detail(const amfh_bench_report* report,
                                     size_t i) {
  if (report == nullptr || i >= report->value.size()) return "";
  return Criterion(report, i).detail.c_str();
}

double amfh_bench_report_seconds(const amfh_bench_report* report, size_t i) {
  if (report == nullptr || i >= report->value.size()) return 0.0;
  return Criterion(report, i).seconds;
}

void amfh_bench_report_free(amfh_bench_report* report) { delete report; }

}  // extern "C"
