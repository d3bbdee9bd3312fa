// amfh command-line tool. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "amfh/amfh.h"

namespace {

struct ApiError : std::runtime_error {
  ApiError(amfh_status s, const std::string& message)
      : std::runtime_error(message), status(s) {}
  amfh_status status;
};

void Check(amfh_status status) {
  if (status != AMFH_OK) throw ApiError(status, amfh_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Features = std::unique_ptr<amfh_features,
                                 Deleter<amfh_features, amfh_features_free>>;
using Labels = std::unique_ptr<amfh_labels, Deleter<amfh_labels, amfh_labels_free>>;
using Codes = std::unique_ptr<amfh_codes, Deleter<amfh_codes, amfh_codes_free>>;
using Centers =
    std::unique_ptr<amfh_centers, Deleter<amfh_centers, amfh_centers_free>>;
using Model = std::unique_ptr<amfh_model, Deleter<amfh_model, amfh_model_free>>;
using Dataset =
    std::unique_ptr<amfh_dataset, Deleter<amfh_dataset, amfh_dataset_free>>;
using Report = std::unique_ptr<amfh_eval_report,
                               Deleter<amfh_eval_report, amfh_eval_report_free>>;
using Bench = std::unique_ptr<amfh_bench_report,
                              Deleter<amfh_bench_report, amfh_bench_report_free>>;

template <typename Handle, typename Raw>
Handle Make(amfh_status (*fn)(const char*, Raw**), const std::string& path) {
  Raw* raw = nullptr;
  Check(fn(path.c_str(), &raw));
  return Handle(raw);
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string FmtG(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// %.10g, with ".0" appended to integral values.
std::string FmtDecimal(double v) {
  std::string s = FmtG(v);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) throw ApiError(AMFH_ERR_IO, "cannot write " + path);
}

// Options shared by the commands that train a model.
struct TrainFlags {
  std::size_t bits = 16;
  std::uint64_t center_seed = 0;
  amfh_train_config train{};

  TrainFlags() { amfh_train_config_default(&train); }

  void Register(CLI::App* cmd) {
    cmd->add_option("--bits", bits, "code length r")->capture_default_str();
    cmd->add_option("--center-seed", center_seed, "seed for LSH centers")
        ->capture_default_str();
    cmd->add_option("--delta", train.delta, "ridge weight")->capture_default_str();
    cmd->add_option("--anchors", train.num_anchors, "anchors per modality")
        ->capture_default_str();
    cmd->add_option("--seed", train.seed, "anchor sampling seed")
        ->capture_default_str();
    cmd->add_option("--max-iters", train.max_iters, "alternation cap")
        ->capture_default_str();
    cmd->add_option("--tol", train.rel_tol, "relative objective tolerance")
        ->capture_default_str();
    cmd->add_option("--kernel-width", train.kernel_width,
                    "RBF width (0 = mean anchor distance)")
        ->capture_default_str();
  }

  amfh_protocol_config Protocol() const {
    amfh_protocol_config p;
    amfh_protocol_config_default(&p);
    p.code_length = bits;
    p.center_seed = center_seed;
    p.train = train;
    return p;
  }
};

// ---- synth -----------------------------------------------------------------

struct SynthFlags {
  std::string out;
  int classes = 4;
  std::size_t per_class = 200;
  std::vector<std::size_t> dims = {32, 16};
  std::vector<double> spread = {0.3, 0.3};
  double train_fraction = 0.5;
  std::size_t batch_size = 20;
  std::size_t query_every = 5;
  std::vector<int> noise_modality;
  std::vector<double> noise_level;
  std::uint64_t seed = 0;
};

int RunSynth(SynthFlags f) {
  if (f.spread.size() == 1) f.spread.resize(f.dims.size(), f.spread.front());
  if (f.spread.size() != f.dims.size()) {
    throw CLI::ValidationError("--spread", "needs one value, or one per --dims entry");
  }
  if (f.noise_modality.size() != f.noise_level.size()) {
    throw CLI::ValidationError("--noise-level",
                               "needs one value per --noise-modality entry");
  }
  amfh_synth_spec spec{};
  spec.num_classes = f.classes;
  spec.samples_per_class = f.per_class;
  spec.num_modalities = f.dims.size();
  spec.modality_dims = f.dims.data();
  spec.spread = f.spread.data();
  spec.train_fraction = f.train_fraction;
  spec.stream_batch_size = f.batch_size;
  spec.query_every = f.query_every;
  spec.num_noise_events = f.noise_modality.size();
  spec.noise_modality = f.noise_modality.data();
  spec.noise_level = f.noise_level.data();
  spec.seed = f.seed;
  amfh_dataset* raw = nullptr;
  Check(amfh_synth_generate(&spec, &raw));
  Dataset data(raw);
  Check(amfh_dataset_write(data.get(), f.out.c_str()));
  std::cout << "samples=" << amfh_dataset_size(data.get())
            << " modalities=" << amfh_dataset_num_modalities(data.get())
            << " train=" << amfh_dataset_num_train(data.get())
            << " batches=" << amfh_dataset_num_batches(data.get())
            << " out=" << f.out << '\n';
  return 0;
}

// ---- centers ---------------------------------------------------------------

struct CentersFlags {
  std::size_t bits = 16;
  std::size_t classes = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int RunCenters(const CentersFlags& f) {
  amfh_centers* raw = nullptr;
  Check(amfh_centers_build(f.bits, f.classes, f.seed, &raw));
  Centers centers(raw);
  amfh_center_audit audit{};
  Check(amfh_centers_audit(centers.get(), &audit));
  if (!f.out.empty()) Check(amfh_centers_store(centers.get(), f.out.c_str()));
  std::cout << "r*=" << amfh_centers_order(centers.get())
            << " source=" << (amfh_centers_exact(centers.get()) ? "hadamard" : "lsh")
            << " seed=" << amfh_centers_seed(centers.get())
            << " average_distance=" << FmtDecimal(audit.average)
            << " minimum_distance=" << audit.minimum
            << " threshold=" << FmtG(audit.threshold) << ' '
            << (audit.pass ? "PASS" : "FAIL") << '\n';
  return audit.pass ? 0 : 1;
}

// ---- train -----------------------------------------------------------------

struct TrainCmd {
  TrainFlags flags;
  std::vector<std::string> features;
  std::string labels;
  std::string centers;
  std::string out;
  std::string centers_out;
};

int RunTrain(const TrainCmd& c) {
  Labels labels = Make<Labels>(amfh_labels_load, c.labels);
  std::vector<Features> owned;
  std::vector<const amfh_features*> views;
  for (const std::string& path : c.features) {
    owned.push_back(Make<Features>(amfh_features_load, path));
    views.push_back(owned.back().get());
  }
  Centers centers;
  if (!c.centers.empty()) {
    centers = Make<Centers>(amfh_centers_load, c.centers);
  } else {
    amfh_centers* raw = nullptr;
    Check(amfh_centers_build(c.flags.bits,
                             static_cast<std::size_t>(
                                 amfh_labels_num_classes(labels.get())),
                             c.flags.center_seed, &raw));
    centers.reset(raw);
  }
  if (!c.centers_out.empty()) {
    Check(amfh_centers_store(centers.get(), c.centers_out.c_str()));
  }
  amfh_model* raw = nullptr;
  Check(amfh_model_fit(views.data(), views.size(), labels.get(), centers.get(),
                       &c.flags.train, &raw));
  Model model(raw);
  Check(amfh_model_store(model.get(), c.out.c_str()));

  std::vector<double> weights(amfh_model_num_modalities(model.get()));
  Check(amfh_model_weights(model.get(), weights.data(), weights.size()));
  std::vector<double> trace(amfh_model_trace_length(model.get()));
  Check(amfh_model_trace(model.get(), trace.data(), trace.size()));
  std::cout << "iterations=" << amfh_model_iterations(model.get())
            << " converged=" << amfh_model_converged(model.get())
            << " objective=" << (trace.empty() ? "nan" : FmtG(trace.back()))
            << " weights=";
  for (std::size_t m = 0; m < weights.size(); ++m) {
    std::cout << (m ? "," : "") << Fmt(weights[m]);
  }
  std::cout << " out=" << c.out << '\n';
  return 0;
}

// ---- encode ----------------------------------------------------------------

struct EncodeCmd {
  std::string model;
  std::vector<std::string> features;
  std::vector<std::size_t> missing;
  std::string mode = "adaptive";
  std::size_t batch_size = 0;
  std::string weights_trace;
  std::string out;
  int max_iters = 30;
  double tol = 1e-5;
};

int RunEncode(const EncodeCmd& c) {
  Model model = Make<Model>(amfh_model_load, c.model);
  const std::size_t m_count = amfh_model_num_modalities(model.get());
  std::vector<bool> absent(m_count, false);
  for (std::size_t m : c.missing) {
    if (m >= m_count) {
      throw CLI::ValidationError("--missing",
                                 "modality " + std::to_string(m) + " out of range");
    }
    absent[m] = true;
  }
  std::vector<Features> inputs(m_count);
  std::size_t next = 0;
  std::size_t n = 0;
  bool have_n = false;
  for (std::size_t m = 0; m < m_count; ++m) {
    if (absent[m]) continue;
    if (next >= c.features.size()) {
      throw CLI::ValidationError("--features",
                                 "one file per present modality is required");
    }
    inputs[m] = Make<Features>(amfh_features_load, c.features[next++]);
    const std::size_t cols = amfh_features_cols(inputs[m].get());
    if (have_n && cols != n) {
      throw ApiError(AMFH_ERR_SHAPE, "feature files differ in sample count");
    }
    n = cols;
    have_n = true;
  }
  if (next != c.features.size()) {
    throw CLI::ValidationError("--features",
                               "more files than present modalities");
  }
  if (!have_n) throw ApiError(AMFH_ERR_EMPTY_BATCH, "every modality is missing");

  amfh_encode_options options;
  amfh_encode_options_default(&options);
  if (c.mode == "fixed") options.mode = AMFH_ENCODE_FIXED;
  options.max_iters = c.max_iters;
  options.rel_tol = c.tol;

  const std::size_t step = c.batch_size == 0 ? n : c.batch_size;
  std::size_t bits = amfh_model_code_length(model.get());
  std::vector<std::int8_t> all;
  all.reserve(bits * n);
  std::ostringstream trace;
  std::size_t batch = 0;
  for (std::size_t first = 0; first < n; first += step, ++batch) {
    const std::size_t count = std::min(step, n - first);
    std::vector<Features> slices(m_count);
    std::vector<const amfh_features*> views(m_count, nullptr);
    for (std::size_t m = 0; m < m_count; ++m) {
      if (!inputs[m]) continue;
      amfh_features* raw = nullptr;
      Check(amfh_features_slice(inputs[m].get(), first, count, &raw));
      slices[m].reset(raw);
      views[m] = raw;
    }
    amfh_codes* raw = nullptr;
    std::vector<double> weights(m_count);
    int iterations = 0;
    Check(amfh_encode(model.get(), views.data(), m_count, &options, &raw,
                      weights.data(), &iterations));
    Codes codes(raw);
    const std::size_t offset = all.size();
    all.resize(offset + bits * count);
    Check(amfh_codes_copy(codes.get(), all.data() + offset, bits * count));
    trace << batch;
    for (double w : weights) trace << ' ' << Fmt(w);
    trace << '\n';
  }
  amfh_codes* raw = nullptr;
  Check(amfh_codes_create(bits, n, all.data(), &raw));
  Codes codes(raw);
  Check(amfh_codes_store(codes.get(), c.out.c_str()));
  if (!c.weights_trace.empty()) WriteTextFile(c.weights_trace, trace.str());
  std::cout << "codes=" << n << " bits=" << bits << " batches=" << batch
            << " mode=" << c.mode << " out=" << c.out << '\n';
  return 0;
}

// ---- query -----------------------------------------------------------------

struct QueryCmd {
  std::string queries;
  std::string db;
  std::size_t top = 10;
  long index = -1;
};

int RunQuery(const QueryCmd& c) {
  Codes queries = Make<Codes>(amfh_codes_load, c.queries);
  Codes db = Make<Codes>(amfh_codes_load, c.db);
  const std::size_t k = std::min(c.top, amfh_codes_count(db.get()));
  const std::size_t nq = amfh_codes_count(queries.get());
  std::size_t first = 0;
  std::size_t last = nq;
  if (c.index >= 0) {
    first = static_cast<std::size_t>(c.index);
    last = first + 1;
  }
  std::vector<std::size_t> indices(k);
  std::vector<std::uint32_t> distances(k);
  for (std::size_t q = first; q < last; ++q) {
    Check(amfh_rank(queries.get(), q, db.get(), k, indices.data(),
                    distances.data()));
    std::cout << "query=" << q << " top=";
    for (std::size_t i = 0; i < k; ++i) {
      std::cout << (i ? "," : "") << indices[i] << ':' << distances[i];
    }
    std::cout << '\n';
  }
  return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalCmd {
  std::string queries;
  std::string query_labels;
  std::string db;
  std::string db_labels;
  std::size_t cutoff = 0;
  std::size_t top_k = 0;
  std::string format = "text";
  bool per_query = false;
  std::string out;
};

int RunEval(const EvalCmd& c) {
  Codes queries = Make<Codes>(amfh_codes_load, c.queries);
  Labels qlabels = Make<Labels>(amfh_labels_load, c.query_labels);
  Codes db = Make<Codes>(amfh_codes_load, c.db);
  Labels dblabels = Make<Labels>(amfh_labels_load, c.db_labels);
  amfh_eval_report* raw = nullptr;
  Check(amfh_evaluate(queries.get(), qlabels.get(), db.get(), dblabels.get(),
                      c.cutoff, c.top_k, &raw));
  Report report(raw);
  const std::string text =
      amfh_eval_report_format(report.get(), c.format == "kv", c.per_query);
  std::cout << text;
  if (!c.out.empty()) {
    WriteTextFile(c.out, amfh_eval_report_format(report.get(), 1, c.per_query));
  }
  return 0;
}

// ---- bench / sweep-delta / ablate -------------------------------------------

struct BenchCmd {
  amfh_bench_config config{};
  std::string report;

  BenchCmd() { amfh_bench_config_default(&config); }
};

int RunBenchCmd(const BenchCmd& c) {
  amfh_bench_report* raw = nullptr;
  Check(amfh_bench_run(&c.config, &raw));
  Bench report(raw);
  std::ostringstream kv;
  bool all = true;
  for (std::size_t i = 0; i < amfh_bench_report_count(report.get()); ++i) {
    const int id = amfh_bench_report_id(report.get(), i);
    const bool ok = amfh_bench_report_passed(report.get(), i) != 0;
    all = all && ok;
    std::cout << "criterion " << id << ' ' << (ok ? "PASS" : "FAIL") << ' '
              << amfh_bench_report_name(report.get(), i) << ": "
              << amfh_bench_report_detail(report.get(), i) << '\n';
    kv << "criterion." << id << ".name=" << amfh_bench_report_name(report.get(), i)
       << "\ncriterion." << id << ".passed=" << (ok ? 1 : 0) << "\ncriterion."
       << id << ".detail=" << amfh_bench_report_detail(report.get(), i) << '\n';
  }
  std::cout << "overall " << (all ? "PASS" : "FAIL") << '\n';
  kv << "overall=" << (all ? "PASS" : "FAIL") << '\n';
  if (!c.report.empty()) WriteTextFile(c.report, kv.str());
  return all ? 0 : 1;
}

struct DataFlags {
  std::string data;
  std::uint64_t seed = 0;
};

struct SweepCmd {
  DataFlags data;
  double spread = 0.3;
  TrainFlags flags;
  std::vector<double> deltas = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  double bound = 0.05;
};

int RunSweep(const SweepCmd& c) {
  Dataset data;
  if (!c.data.data.empty()) {
    data = Make<Dataset>(amfh_dataset_read, c.data.data);
  } else {
    amfh_dataset* raw = nullptr;
    Check(amfh_synth_standard(c.spread, c.data.seed, &raw));
    data.reset(raw);
  }
  const amfh_protocol_config protocol = c.flags.Protocol();
  std::vector<double> maps(c.deltas.size());
  std::vector<int> iterations(c.deltas.size());
  double range = 0.0;
  Check(amfh_sweep_delta(data.get(), &protocol, c.deltas.data(), c.deltas.size(),
                         maps.data(), iterations.data(), &range));
  for (std::size_t i = 0; i < c.deltas.size(); ++i) {
    std::cout << "delta=" << FmtG(c.deltas[i]) << " map=" << Fmt(maps[i])
              << " iterations=" << iterations[i] << '\n';
  }
  std::cout << "range=" << Fmt(range) << " bound=" << FmtG(c.bound) << ' '
            << (range < c.bound ? "STABLE" : "UNSTABLE") << '\n';
  return 0;
}

struct AblateCmd {
  DataFlags data;
  double noise_level = 2.0;
  TrainFlags flags;
  std::string weights_trace;
};

int RunAblate(const AblateCmd& c) {
  Dataset data;
  if (!c.data.data.empty()) {
    data = Make<Dataset>(amfh_dataset_read, c.data.data);
  } else {
    amfh_dataset* raw = nullptr;
    Check(amfh_synth_ablation(c.data.seed, c.noise_level, &raw));
    data.reset(raw);
  }
  const amfh_protocol_config protocol = c.flags.Protocol();
  const std::size_t m_count = amfh_dataset_num_modalities(data.get());
  std::vector<double> trace(amfh_dataset_num_batches(data.get()) * m_count);
  amfh_ablation_summary summary{};
  Check(amfh_ablate(data.get(), &protocol, &summary, trace.data(), trace.size()));
  std::cout << "adaptive_map=" << Fmt(summary.adaptive_map)
            << " fixed_map=" << Fmt(summary.fixed_map)
            << " corrupted_heaviest=" << summary.corrupted_heaviest << '/'
            << summary.corrupted_batches << ' '
            << (summary.adaptive_map >= summary.fixed_map ? "ADAPTIVE>=FIXED"
                                                          : "ADAPTIVE<FIXED")
            << '\n';
  if (!c.weights_trace.empty()) {
    std::ostringstream out;
    for (std::size_t b = 0; b < summary.num_batches; ++b) {
      out << b;
      for (std::size_t m = 0; m < m_count; ++m) {
        out << ' ' << Fmt(trace[b * m_count + m]);
      }
      out << '\n';
    }
    WriteTextFile(c.weights_trace, out.str());
  }
  return 0;
}

void PrintError(const std::string& code, const std::string& message) {
  std::string flat = message;
  for (char& ch : flat) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  std::cerr << "amfh: error code=" << code << " message=\"" << flat << "\"\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive multi-modal fusion hashing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", amfh_version());

  auto with_config = [](CLI::App* cmd, const char* flag = "--config") {
    cmd->set_config(flag, "", "key=value file; flags override it");
    return cmd;
  };

  SynthFlags synth;
  auto* synth_cmd = with_config(
      app.add_subcommand("synth", "generate a synthetic dataset bundle"), "--spec");
  synth_cmd->add_option("--out", synth.out, "output directory")->required();
  synth_cmd->add_option("--classes", synth.classes)->capture_default_str();
  synth_cmd->add_option("--per-class", synth.per_class)->capture_default_str();
  synth_cmd->add_option("--dims", synth.dims)->delimiter(',')->capture_default_str();
  synth_cmd->add_option("--spread", synth.spread)->delimiter(',')->capture_default_str();
  synth_cmd->add_option("--train-fraction", synth.train_fraction)
      ->capture_default_str();
  synth_cmd->add_option("--batch-size", synth.batch_size)->capture_default_str();
  synth_cmd->add_option("--query-every", synth.query_every)->capture_default_str();
  synth_cmd->add_option("--noise-modality", synth.noise_modality,
                        "per-batch corrupted modality, cycled (-1 = clean)")
      ->delimiter(',');
  synth_cmd->add_option("--noise-level", synth.noise_level)->delimiter(',');
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();

  CentersFlags centers;
  auto* centers_cmd =
      with_config(app.add_subcommand("centers", "build and audit hash centers"));
  centers_cmd->add_option("--bits", centers.bits)->capture_default_str();
  centers_cmd->add_option("--classes", centers.classes)->required();
  centers_cmd->add_option("--seed", centers.seed)->capture_default_str();
  centers_cmd->add_option("--out", centers.out, "write the center table");

  TrainCmd train;
  auto* train_cmd = with_config(app.add_subcommand("train", "fit a model"));
  train.flags.Register(train_cmd);
  train_cmd->add_option("--features", train.features, "one file per modality")
      ->required()
      ->delimiter(',');
  train_cmd->add_option("--labels", train.labels)->required();
  train_cmd->add_option("--centers", train.centers, "existing center table");
  train_cmd->add_option("--centers-out", train.centers_out);
  train_cmd->add_option("--out", train.out, "model file")->required();

  EncodeCmd encode;
  auto* encode_cmd = with_config(app.add_subcommand("encode", "encode features"));
  encode_cmd->add_option("--model", encode.model)->required();
  encode_cmd->add_option("--features", encode.features,
                         "one file per present modality, in modality order")
      ->required()
      ->delimiter(',');
  encode_cmd->add_option("--missing", encode.missing, "absent modality indices")
      ->delimiter(',');
  encode_cmd->add_option("--mode", encode.mode)
      ->check(CLI::IsMember({"adaptive", "fixed"}))
      ->capture_default_str();
  encode_cmd->add_option("--batch-size", encode.batch_size, "0 = one batch")
      ->capture_default_str();
  encode_cmd->add_option("--weights-trace", encode.weights_trace);
  encode_cmd->add_option("--max-iters", encode.max_iters)->capture_default_str();
  encode_cmd->add_option("--tol", encode.tol)->capture_default_str();
  encode_cmd->add_option("--out", encode.out)->required();

  QueryCmd query;
  auto* query_cmd = with_config(app.add_subcommand("query", "rank a code database"));
  query_cmd->add_option("--queries", query.queries)->required();
  query_cmd->add_option("--db", query.db)->required();
  query_cmd->add_option("--top", query.top)->capture_default_str();
  query_cmd->add_option("--index", query.index, "single query column");

  EvalCmd eval;
  auto* eval_cmd = with_config(app.add_subcommand("eval", "compute mAP"));
  eval_cmd->add_option("--queries", eval.queries)->required();
  eval_cmd->add_option("--query-labels", eval.query_labels)->required();
  eval_cmd->add_option("--db", eval.db)->required();
  eval_cmd->add_option("--db-labels", eval.db_labels)->required();
  eval_cmd->add_option("--cutoff", eval.cutoff, "0 = full ranking")
      ->capture_default_str();
  eval_cmd->add_option("--top-k", eval.top_k, "precision@k (0 = off)")
      ->capture_default_str();
  eval_cmd->add_option("--format", eval.format)
      ->check(CLI::IsMember({"text", "kv"}))
      ->capture_default_str();
  eval_cmd->add_flag("--per-query", eval.per_query);
  eval_cmd->add_option("--out", eval.out, "key=value report file");

  BenchCmd bench;
  auto* bench_cmd =
      with_config(app.add_subcommand("bench", "run the acceptance protocol"));
  bench_cmd->add_option("--seed", bench.config.seed)->capture_default_str();
  bench_cmd->add_option("--spread", bench.config.spread)->capture_default_str();
  bench_cmd->add_option("--noise-level", bench.config.noise_level)
      ->capture_default_str();
  bench_cmd->add_option("--bits", bench.config.protocol.code_length)
      ->capture_default_str();
  bench_cmd->add_option("--report", bench.report, "key=value report file");

  SweepCmd sweep;
  auto* sweep_cmd =
      with_config(app.add_subcommand("sweep-delta", "mAP across ridge weights"));
  sweep.flags.Register(sweep_cmd);
  sweep_cmd->add_option("--data", sweep.data.data, "bundle directory");
  sweep_cmd->add_option("--data-seed", sweep.data.seed)->capture_default_str();
  sweep_cmd->add_option("--spread", sweep.spread)->capture_default_str();
  sweep_cmd->add_option("--deltas", sweep.deltas)->delimiter(',');
  sweep_cmd->add_option("--bound", sweep.bound)->capture_default_str();

  AblateCmd ablate;
  auto* ablate_cmd =
      with_config(app.add_subcommand("ablate", "adaptive vs fixed encoding"));
  ablate.flags.Register(ablate_cmd);
  ablate_cmd->add_option("--data", ablate.data.data, "bundle directory");
  ablate_cmd->add_option("--data-seed", ablate.data.seed)->capture_default_str();
  ablate_cmd->add_option("--noise-level", ablate.noise_level)
      ->capture_default_str();
  ablate_cmd->add_option("--weights-trace", ablate.weights_trace);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    PrintError("usage", e.what());
    return 2;
  }

  try {
    if (*synth_cmd) return RunSynth(synth);
    if (*centers_cmd) return RunCenters(centers);
    if (*train_cmd) return RunTrain(train);
    if (*encode_cmd) return RunEncode(encode);
    if (*query_cmd) return RunQuery(query);
    if (*eval_cmd) return RunEval(eval);
    if (*bench_cmd) return RunBenchCmd(bench);
    if (*sweep_cmd) return RunSweep(sweep);
    if (*ablate_cmd) return RunAblate(ablate);
  } catch (const CLI::ParseError& e) {
    PrintError("usage", e.what());
    return 2;
  } catch (const ApiError& e) {
    PrintError(amfh_status_name(e.status), e.what());
    return 1;
  } catch (const std::exception& e) {
    PrintError("internal", e.what());
    return 1;
  }
  return 2;
}
