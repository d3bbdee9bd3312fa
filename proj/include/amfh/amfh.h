/*
 * C interface to the adaptive multi-modal fusion hashing toolkit.
 *
 * Every object is an opaque handle created by an amfh_*_create / _load /
 * _build / _fit call and released with the matching amfh_*_free. Fallible
 * calls return an amfh_status; on failure amfh_last_error() holds a one-line
 * description that stays valid until the next failing call on the same
 * thread. Output handles are only written on success.
 *
 * Matrices cross the boundary column-major: feature matrices are
 * rows = feature dimension, cols = samples; code matrices are rows = bits,
 * cols = codes, with entries -1 or +1.
 */
#ifndef AMFH_AMFH_H_
#define AMFH_AMFH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(AMFH_BUILDING_LIBRARY)
#    define AMFH_API __declspec(dllexport)
#  else
#    define AMFH_API __declspec(dllimport)
#  endif
#else
#  define AMFH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum amfh_status {
  AMFH_OK = 0,
  AMFH_ERR_INVALID_ARGUMENT = 1,
  AMFH_ERR_INVALID_ORDER = 2,
  AMFH_ERR_INVALID_LENGTH = 3,
  AMFH_ERR_CENTER_SEPARATION = 4,
  AMFH_ERR_INVALID_LABEL = 5,
  AMFH_ERR_SHAPE = 6,
  AMFH_ERR_INSUFFICIENT_DATA = 7,
  AMFH_ERR_DEGENERATE_WEIGHT = 8,
  AMFH_ERR_NUMERICAL = 9,
  AMFH_ERR_EMPTY_BATCH = 10,
  AMFH_ERR_INVALID_CUTOFF = 11,
  AMFH_ERR_CORRUPT_FILE = 12,
  AMFH_ERR_IO = 13,
  AMFH_ERR_NULL_HANDLE = 99,
  AMFH_ERR_INTERNAL = 100
} amfh_status;

AMFH_API const char* amfh_version(void);
/* Short kebab-case name, e.g. "corrupt-file". */
AMFH_API const char* amfh_status_name(amfh_status status);
AMFH_API const char* amfh_last_error(void);

typedef struct amfh_features amfh_features;
typedef struct amfh_labels amfh_labels;
typedef struct amfh_codes amfh_codes;
typedef struct amfh_centers amfh_centers;
typedef struct amfh_model amfh_model;
typedef struct amfh_dataset amfh_dataset;
typedef struct amfh_eval_report amfh_eval_report;
typedef struct amfh_bench_report amfh_bench_report;

/* ---- feature matrices ---------------------------------------------------- */

AMFH_API amfh_status amfh_features_create(size_t rows, size_t cols,
                                          const double* col_major,
                                          amfh_features** out);
/* Binary AMFH features file, or CSV with one sample per row. */
AMFH_API amfh_status amfh_features_load(const char* path, amfh_features** out);
AMFH_API amfh_status amfh_features_store(const amfh_features* features,
                                         const char* path);
AMFH_API size_t amfh_features_rows(const amfh_features* features);
AMFH_API size_t amfh_features_cols(const amfh_features* features);
AMFH_API amfh_status amfh_features_copy(const amfh_features* features,
                                        double* col_major, size_t len);
/* Columns [first, first + count). */
AMFH_API amfh_status amfh_features_slice(const amfh_features* features,
                                         size_t first, size_t count,
                                         amfh_features** out);
AMFH_API void amfh_features_free(amfh_features* features);

/* ---- label sets ---------------------------------------------------------- */

/* Sample i owns indices[offsets[i] .. offsets[i+1]); offsets has
 * num_samples + 1 entries. */
AMFH_API amfh_status amfh_labels_create(int num_classes, size_t num_samples,
                                        const size_t* offsets,
                                        const int32_t* indices,
                                        amfh_labels** out);
AMFH_API amfh_status amfh_labels_load(const char* path, amfh_labels** out);
AMFH_API amfh_status amfh_labels_store(const amfh_labels* labels,
                                       const char* path);
AMFH_API size_t amfh_labels_count(const amfh_labels* labels);
AMFH_API int amfh_labels_num_classes(const amfh_labels* labels);
AMFH_API amfh_status amfh_labels_slice(const amfh_labels* labels, size_t first,
                                       size_t count, amfh_labels** out);
AMFH_API void amfh_labels_free(amfh_labels* labels);

/* ---- binary codes -------------------------------------------------------- */

AMFH_API amfh_status amfh_codes_create(size_t bits, size_t count,
                                       const int8_t* col_major,
                                       amfh_codes** out);
AMFH_API amfh_status amfh_codes_load(const char* path, amfh_codes** out);
AMFH_API amfh_status amfh_codes_store(const amfh_codes* codes,
                                      const char* path);
AMFH_API size_t amfh_codes_bits(const amfh_codes* codes);
AMFH_API size_t amfh_codes_count(const amfh_codes* codes);
AMFH_API amfh_status amfh_codes_copy(const amfh_codes* codes, int8_t* col_major,
                                     size_t len);
AMFH_API amfh_status amfh_codes_distance(const amfh_codes* a, size_t i,
                                         const amfh_codes* b, size_t j,
                                         size_t* out);
AMFH_API void amfh_codes_free(amfh_codes* codes);

/* ---- hash centers -------------------------------------------------------- */

typedef struct amfh_center_audit {
  double average;
  size_t minimum;
  double threshold;
  int pass;
} amfh_center_audit;

AMFH_API amfh_status amfh_centers_build(size_t bits, size_t classes,
                                        uint64_t seed, amfh_centers** out);
AMFH_API amfh_status amfh_centers_audit(const amfh_centers* centers,
                                        amfh_center_audit* out);
AMFH_API size_t amfh_centers_bits(const amfh_centers* centers);
AMFH_API size_t amfh_centers_classes(const amfh_centers* centers);
AMFH_API size_t amfh_centers_order(const amfh_centers* centers);
AMFH_API uint64_t amfh_centers_seed(const amfh_centers* centers);
AMFH_API int amfh_centers_exact(const amfh_centers* centers);
/* bits x classes table as a code matrix. */
AMFH_API amfh_status amfh_centers_codes(const amfh_centers* centers,
                                        amfh_codes** out);
/* Per-sample target codes (multi-label samples get the sign of the mean). */
AMFH_API amfh_status amfh_centers_assign(const amfh_centers* centers,
                                         const amfh_labels* labels,
                                         amfh_codes** out);
AMFH_API amfh_status amfh_centers_load(const char* path, amfh_centers** out);
AMFH_API amfh_status amfh_centers_store(const amfh_centers* centers,
                                        const char* path);
AMFH_API void amfh_centers_free(amfh_centers* centers);

/* ---- training ------------------------------------------------------------ */

typedef struct amfh_train_config {
  double delta;
  int max_iters;
  double rel_tol;
  uint64_t seed;
  size_t num_anchors;  /* clamped to the training sample count */
  double kernel_width; /* 0 = mean anchor distance */
} amfh_train_config;

AMFH_API void amfh_train_config_default(amfh_train_config* config);

AMFH_API amfh_status amfh_model_fit(const amfh_features* const* modalities,
                                    size_t num_modalities,
                                    const amfh_labels* labels,
                                    const amfh_centers* centers,
                                    const amfh_train_config* config,
                                    amfh_model** out);
AMFH_API amfh_status amfh_model_load(const char* path, amfh_model** out);
AMFH_API amfh_status amfh_model_store(const amfh_model* model,
                                      const char* path);
AMFH_API size_t amfh_model_num_modalities(const amfh_model* model);
AMFH_API size_t amfh_model_code_length(const amfh_model* model);
AMFH_API int amfh_model_iterations(const amfh_model* model);
AMFH_API int amfh_model_converged(const amfh_model* model);
AMFH_API double amfh_model_delta(const amfh_model* model);
AMFH_API amfh_status amfh_model_weights(const amfh_model* model, double* out,
                                        size_t len);
AMFH_API size_t amfh_model_trace_length(const amfh_model* model);
AMFH_API amfh_status amfh_model_trace(const amfh_model* model, double* out,
                                      size_t len);
AMFH_API void amfh_model_free(amfh_model* model);

/* ---- encoding ------------------------------------------------------------ */

typedef enum amfh_encode_mode {
  AMFH_ENCODE_ADAPTIVE = 0,
  AMFH_ENCODE_FIXED = 1
} amfh_encode_mode;

typedef struct amfh_encode_options {
  amfh_encode_mode mode;
  int max_iters;
  double rel_tol;
} amfh_encode_options;

AMFH_API void amfh_encode_options_default(amfh_encode_options* options);

/* Encodes one batch. modalities[m] == NULL marks modality m as missing.
 * weights_out (num_modalities entries) and iterations_out may be NULL. */
AMFH_API amfh_status amfh_encode(const amfh_model* model,
                                 const amfh_features* const* modalities,
                                 size_t num_modalities,
                                 const amfh_encode_options* options,
                                 amfh_codes** codes_out, double* weights_out,
                                 int* iterations_out);

/* ---- retrieval and evaluation -------------------------------------------- */

/* Top-k database codes for query column `query`, nearest first; ties by
 * ascending database index. */
AMFH_API amfh_status amfh_rank(const amfh_codes* queries, size_t query,
                               const amfh_codes* database, size_t k,
                               size_t* indices_out, uint32_t* distances_out);

AMFH_API amfh_status amfh_average_precision(const uint8_t* relevance,
                                            size_t len, size_t cutoff,
                                            double* out);

/* cutoff 0 = full database; top_k 0 disables precision@k. */
AMFH_API amfh_status amfh_evaluate(const amfh_codes* queries,
                                   const amfh_labels* query_labels,
                                   const amfh_codes* database,
                                   const amfh_labels* database_labels,
                                   size_t cutoff, size_t top_k,
                                   amfh_eval_report** out);
AMFH_API double amfh_eval_report_map(const amfh_eval_report* report);
AMFH_API size_t amfh_eval_report_num_queries(const amfh_eval_report* report);
AMFH_API size_t amfh_eval_report_cutoff(const amfh_eval_report* report);
AMFH_API double amfh_eval_report_precision_at_k(const amfh_eval_report* report);
AMFH_API amfh_status amfh_eval_report_per_query(const amfh_eval_report* report,
                                                double* out, size_t len);
/* Plain-text table (key_value = 0) or key=value lines. The string is owned by
 * the report and valid until the next call on it or its release. */
AMFH_API const char* amfh_eval_report_format(amfh_eval_report* report,
                                             int key_value, int per_query);
AMFH_API void amfh_eval_report_free(amfh_eval_report* report);

/* ---- synthetic datasets -------------------------------------------------- */

typedef struct amfh_synth_spec {
  int num_classes;
  size_t samples_per_class;
  size_t num_modalities;
  const size_t* modality_dims;  /* num_modalities entries */
  const double* spread;         /* num_modalities entries */
  double train_fraction;
  size_t stream_batch_size;
  size_t query_every;
  size_t num_noise_events;       /* schedule cycled over stream batches */
  const int* noise_modality;     /* -1 = clean batch */
  const double* noise_level;
  uint64_t seed;
} amfh_synth_spec;

AMFH_API amfh_status amfh_synth_generate(const amfh_synth_spec* spec,
                                         amfh_dataset** out);
/* 4 classes x 200, dims (32, 16), half training, 20-sample stream batches. */
AMFH_API amfh_status amfh_synth_standard(double spread, uint64_t seed,
                                         amfh_dataset** out);
/* Noise-scheduled stream used by the adaptive-vs-fixed comparison. */
AMFH_API amfh_status amfh_synth_ablation(uint64_t seed, double noise_level,
                                         amfh_dataset** out);
AMFH_API amfh_status amfh_dataset_write(const amfh_dataset* dataset,
                                        const char* dir);
AMFH_API amfh_status amfh_dataset_read(const char* dir, amfh_dataset** out);
AMFH_API size_t amfh_dataset_size(const amfh_dataset* dataset);
AMFH_API size_t amfh_dataset_num_modalities(const amfh_dataset* dataset);
AMFH_API size_t amfh_dataset_num_batches(const amfh_dataset* dataset);
AMFH_API size_t amfh_dataset_num_train(const amfh_dataset* dataset);
AMFH_API void amfh_dataset_free(amfh_dataset* dataset);

/* ---- experiment protocol ------------------------------------------------- */

typedef struct amfh_protocol_config {
  size_t code_length;
  uint64_t center_seed;
  amfh_train_config train;
  int encode_max_iters;
  double encode_rel_tol;
  size_t cutoff;
} amfh_protocol_config;

AMFH_API void amfh_protocol_config_default(amfh_protocol_config* config);

/* Train on the training split, encode the stream, evaluate queries against
 * the retrieval side. */
AMFH_API amfh_status amfh_run_retrieval(const amfh_dataset* dataset,
                                        const amfh_protocol_config* config,
                                        amfh_encode_mode mode,
                                        double* map_out);

/* maps_out and iterations_out hold `count` entries (iterations_out may be
 * NULL); range_out receives max - min mAP. */
AMFH_API amfh_status amfh_sweep_delta(const amfh_dataset* dataset,
                                      const amfh_protocol_config* config,
                                      const double* deltas, size_t count,
                                      double* maps_out, int* iterations_out,
                                      double* range_out);

typedef struct amfh_ablation_summary {
  double adaptive_map;
  double fixed_map;
  size_t corrupted_batches;
  size_t corrupted_heaviest;
  size_t num_batches;
} amfh_ablation_summary;

/* weight_trace, when not NULL, receives num_batches x num_modalities adaptive
 * weights (batch-major); trace_len must cover that. */
AMFH_API amfh_status amfh_ablate(const amfh_dataset* dataset,
                                 const amfh_protocol_config* config,
                                 amfh_ablation_summary* out,
                                 double* weight_trace, size_t trace_len);

typedef struct amfh_bench_config {
  uint64_t seed;
  double spread;
  double noise_level;
  amfh_protocol_config protocol;
} amfh_bench_config;

AMFH_API void amfh_bench_config_default(amfh_bench_config* config);
AMFH_API amfh_status amfh_bench_run(const amfh_bench_config* config,
                                    amfh_bench_report** out);
AMFH_API size_t amfh_bench_report_count(const amfh_bench_report* report);
AMFH_API int amfh_bench_report_id(const amfh_bench_report* report, size_t i);
AMFH_API const char* amfh_bench_report_name(const amfh_bench_report* report,
                                            size_t i);
AMFH_API int amfh_bench_report_passed(const amfh_bench_report* report,
                                      size_t i);
AMFH_API const char* amfh_bench_report_detail(const amfh_bench_report* report,
                                              size_t i);
AMFH_API double amfh_bench_report_seconds(const amfh_bench_report* report,
                                          size_t i);
AMFH_API void amfh_bench_report_free(amfh_bench_report* report);

#ifdef __cplusplus
}
#endif

#endif /* AMFH_AMFH_H_ */
