// Command-line front end for the duty-cycle anomaly detection pipeline.
//
// Subcommands:
//   gen-data   synthesize a current trace (optionally with anomalies)
//   train      train a detector and export the model file
//   infer      score a trace against a stored model file
//   diol-demo  two-device train/export/load/score round trip + equivalence
//   timeline   join verdicts with features into an operator timeline CSV
//   compare    K-Means detector vs Z-Score baseline on one trace
//
// Every subcommand prints a single-line JSON summary on stdout; human
// diagnostics go to stderr. Exit codes: 0 success, 1 pipeline/domain
// error, 2 usage error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "diol/config.hpp"
#include "diol/datagen.hpp"
#include "diol/device.hpp"
#include "diol/errors.hpp"
#include "diol/features.hpp"
#include "diol/fp.hpp"
#include "diol/kmeans.hpp"
#include "diol/model_format.hpp"
#include "diol/signal.hpp"
#include "diol/zscore.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw diol::Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw diol::Error("cannot write '" + path + "'");
}

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

void emit(const json& summary) { std::cout << summary.dump() << "\n"; }

diol::PipelineConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) return diol::PipelineConfig{};
  return diol::load_config(config_path);
}

// Shared front of the pipeline: CSV -> cleanse -> RMS records -> features.
struct FrontResult {
  diol::CleanseStats cleanse_stats;
  std::size_t raw_samples = 0;
  std::vector<diol::RmsRecord> records;
  std::vector<diol::FeatureVector> features;
};

FrontResult run_front(const diol::PipelineConfig& cfg,
                      const std::string& data_path) {
  FrontResult front;
  const std::vector<diol::CurrentSample> raw =
      diol::parse_sample_csv(slurp(data_path));
  front.raw_samples = raw.size();
  const std::vector<diol::CurrentSample> clean =
      diol::cleanse(raw, cfg.signal, &front.cleanse_stats);
  if (front.cleanse_stats.dropped_nonfinite ||
      front.cleanse_stats.dropped_timestamp) {
    std::cerr << "cleanse: dropped "
              << front.cleanse_stats.dropped_nonfinite << " non-finite and "
              << front.cleanse_stats.dropped_timestamp
              << " out-of-order samples, clamped "
              << front.cleanse_stats.clamped << "\n";
  }
  front.records = diol::compute_rms_windows(clean, cfg.signal);
  front.features =
      diol::extract_features(front.records, diol::resolved_features(cfg, clean));
  return front;
}

diol::KMeansModel load_model(const std::string& path) {
  auto parsed = diol::parse(slurp(path));
  if (const auto* err = std::get_if<diol::ParseError>(&parsed))
    throw diol::ModelFormatError(*err);
  return std::get<diol::ModelDocument>(std::move(parsed)).model;
}

std::string verdicts_jsonl(const std::vector<diol::AnomalyVerdict>& verdicts) {
  std::string out;
  for (const auto& v : verdicts) {
    json row{{"timestamp_ms", v.timestamp_ms},
             {"cluster", v.cluster},
             {"distance", v.distance},
             {"is_anomaly", v.is_anomaly}};
    out += row.dump();
    out.push_back('\n');
  }
  return out;
}

std::size_t count_flagged(const std::vector<diol::AnomalyVerdict>& verdicts) {
  std::size_t n = 0;
  for (const auto& v : verdicts) n += v.is_anomaly ? 1 : 0;
  return n;
}

// ---------------------------------------------------------------- gen-data

struct GenArgs {
  std::string out;
  std::string truth;
  std::string config_path;
  std::string suite;  // empty = take from config
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_s;
};

int run_gen(const GenArgs& args) {
  diol::PipelineConfig cfg = load_or_default(args.config_path);
  if (args.seed) cfg.trace.seed = *args.seed;
  if (args.duration_s) cfg.trace.duration_s = *args.duration_s;
  std::string suite = args.suite.empty() ? cfg.anomaly_suite : args.suite;
  if (suite != "none" && suite != "default")
    throw diol::Error("anomaly suite must be 'none' or 'default'");

  diol::SyntheticTrace trace = diol::generate_trace(cfg.trace);
  if (suite == "default")
    trace = diol::inject_anomalies(
        trace, diol::default_anomaly_suite(cfg.trace, cfg.train.train_fraction));

  spill(args.out, diol::write_sample_csv(trace.samples));
  if (!args.truth.empty())
    spill(args.truth, diol::write_truth_json(trace.truth));

  json summary{{"command", "gen-data"},
               {"out", args.out},
               {"truth", args.truth.empty() ? json(nullptr) : json(args.truth)},
               {"seed", cfg.trace.seed},
               {"duration_s", cfg.trace.duration_s},
               {"samples", trace.samples.size()},
               {"anomalies", trace.truth.size()},
               {"suite", suite}};
  emit(summary);
  return 0;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  std::string data;
  std::string model;
  std::string config_path;
  std::string features_out;
};

int run_train(const TrainArgs& args) {
  const diol::PipelineConfig cfg = load_or_default(args.config_path);
  const FrontResult front = run_front(cfg, args.data);
  if (!args.features_out.empty())
    spill(args.features_out, diol::write_feature_csv(front.features));

  const auto t0 = std::chrono::steady_clock::now();
  const diol::KMeansModel model = diol::train(front.features, cfg.train);
  const double train_ms = ms_since(t0);
  spill(args.model, diol::serialize(model));

  json summary{{"command", "train"},
               {"model", args.model},
               {"records", front.features.size()},
               {"training_records",
                diol::select_training_subset(front.features,
                                             cfg.train.train_fraction)
                    .size()},
               {"k", model.k},
               {"iterations", cfg.train.iterations},
               {"threshold", model.threshold},
               {"train_ms", train_ms}};
  emit(summary);
  return 0;
}

// ------------------------------------------------------------------- infer

struct InferArgs {
  std::string data;
  std::string model;
  std::string config_path;
  std::string out;
  std::string format = "csv";
  std::string features_out;
};

int run_infer(const InferArgs& args) {
  const diol::PipelineConfig cfg = load_or_default(args.config_path);
  const diol::KMeansModel model = load_model(args.model);
  const FrontResult front = run_front(cfg, args.data);
  if (!args.features_out.empty())
    spill(args.features_out, diol::write_feature_csv(front.features));

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<diol::AnomalyVerdict> verdicts =
      diol::infer(front.features, model);
  const double infer_ms = ms_since(t0);

  if (!args.out.empty()) {
    spill(args.out, args.format == "csv" ? diol::write_verdict_csv(verdicts)
                                         : verdicts_jsonl(verdicts));
  }

  const std::size_t flagged = count_flagged(verdicts);
  const double throughput =
      infer_ms > 0.0
          ? static_cast<double>(verdicts.size()) / (infer_ms / 1000.0)
          : 0.0;
  json summary{{"command", "infer"},
               {"records", verdicts.size()},
               {"anomalies", flagged},
               {"anomaly_rate",
                verdicts.empty() ? 0.0
                                 : static_cast<double>(flagged) /
                                       static_cast<double>(verdicts.size())},
               {"threshold", model.threshold},
               {"infer_ms", infer_ms},
               {"throughput_records_per_s", throughput},
               {"out", args.out.empty() ? json(nullptr) : json(args.out)}};
  emit(summary);
  return 0;
}

// --------------------------------------------------------------- diol-demo

struct DemoArgs {
  std::string model;
  std::string data;
  std::string config_path;
  std::string out_a;
  std::string out_b;
  std::optional<std::uint64_t> seed;
};

int run_demo(const DemoArgs& args) {
  diol::PipelineConfig cfg = load_or_default(args.config_path);
  if (args.seed) cfg.trace.seed = *args.seed;

  std::vector<diol::FeatureVector> features;
  if (!args.data.empty()) {
    features = run_front(cfg, args.data).features;
  } else {
    diol::SyntheticTrace trace = diol::generate_trace(cfg.trace);
    if (cfg.anomaly_suite == "default")
      trace = diol::inject_anomalies(
          trace,
          diol::default_anomaly_suite(cfg.trace, cfg.train.train_fraction));
    const std::vector<diol::CurrentSample> clean =
        diol::cleanse(trace.samples, cfg.signal);
    features = diol::extract_features(
        diol::compute_rms_windows(clean, cfg.signal),
        diol::resolved_features(cfg, clean));
  }

  const diol::DeviceReport a =
      diol::run_device_a(features, cfg.train, args.model);
  const diol::DeviceReport b = diol::run_device_b(args.model, features);
  const diol::EquivalenceResult eq = diol::verify_equivalence(a, b);

  if (!args.out_a.empty()) spill(args.out_a, diol::write_verdict_csv(a.verdicts));
  if (!args.out_b.empty()) spill(args.out_b, diol::write_verdict_csv(b.verdicts));

  auto report_json = [](const diol::DeviceReport& r) {
    json timing = json::object();
    for (const auto& [step, ms] : r.timing_ms) timing[step] = ms;
    return json{{"device_id", r.device_id},
                {"model_source", std::string(diol::to_string(r.model_source))},
                {"anomalies", count_flagged(r.verdicts)},
                {"timing_ms", timing}};
  };
  json summary{
      {"command", "diol-demo"},
      {"model", args.model},
      {"records", features.size()},
      {"device_a", report_json(a)},
      {"device_b", report_json(b)},
      {"equivalence",
       {{"identical", eq.identical},
        {"flag_mismatches", eq.flag_mismatches},
        {"max_distance_delta", eq.max_distance_delta},
        {"first_divergence_ms", eq.first_divergence_ms
                                    ? json(*eq.first_divergence_ms)
                                    : json(nullptr)}}}};
  emit(summary);
  if (!eq.identical) {
    std::cerr << "device verdicts diverge; model exchange is not faithful\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------- timeline

struct TimelineArgs {
  std::string verdicts;
  std::string features;
  std::string out;
};

int run_timeline(const TimelineArgs& args) {
  const std::vector<diol::AnomalyVerdict> verdicts =
      diol::parse_verdict_csv(slurp(args.verdicts));
  const std::vector<diol::FeatureVector> features =
      diol::parse_feature_csv(slurp(args.features));
  if (verdicts.size() != features.size())
    throw diol::Error("verdicts cover " + std::to_string(verdicts.size()) +
                      " records but features cover " +
                      std::to_string(features.size()));

  std::string out = "timestamp_ms,rms,state,is_anomaly\n";
  std::size_t on_records = 0;
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].timestamp_ms != verdicts[i].timestamp_ms)
      throw diol::Error("verdicts and features disagree on record " +
                        std::to_string(i) + " timestamps");
    const bool on = features[i].on_duration_s > 0.0;
    on_records += on ? 1 : 0;
    flagged += verdicts[i].is_anomaly ? 1 : 0;
    out += std::to_string(features[i].timestamp_ms);
    out.push_back(',');
    out += diol::format_double(features[i].rms);
    out += on ? ",on," : ",off,";
    out.push_back(verdicts[i].is_anomaly ? '1' : '0');
    out.push_back('\n');
  }
  spill(args.out, out);

  json summary{{"command", "timeline"},
               {"out", args.out},
               {"rows", features.size()},
               {"on_records", on_records},
               {"anomalies", flagged}};
  emit(summary);
  return 0;
}

// ----------------------------------------------------------------- compare

struct CompareArgs {
  std::string data;
  std::string truth;
  std::string config_path;
};

int run_compare(const CompareArgs& args) {
  const diol::PipelineConfig cfg = load_or_default(args.config_path);
  const FrontResult front = run_front(cfg, args.data);

  const diol::KMeansModel km = diol::train(front.features, cfg.train);
  const std::vector<diol::AnomalyVerdict> kv = diol::infer(front.features, km);

  diol::ZScoreConfig zcfg;
  zcfg.train_fraction = cfg.train.train_fraction;
  zcfg.z_threshold = cfg.z_threshold;
  const diol::ZScoreModel zm = diol::train_zscore(front.features, zcfg);
  const std::vector<diol::AnomalyVerdict> zv =
      diol::infer_zscore(front.features, zm);

  std::size_t agree = 0;
  for (std::size_t i = 0; i < kv.size(); ++i)
    agree += kv[i].is_anomaly == zv[i].is_anomaly ? 1 : 0;
  const double flag_agreement =
      kv.empty() ? 1.0 : static_cast<double>(agree) / static_cast<double>(kv.size());

  json kside{{"anomalies", count_flagged(kv)}, {"threshold", km.threshold}};
  json zside{{"anomalies", count_flagged(zv)}, {"z_threshold", zm.z_threshold}};
  json summary{{"command", "compare"},
               {"records", kv.size()},
               {"flag_agreement", flag_agreement},
               {"intervals", json(nullptr)},
               {"interval_agreement", json(nullptr)}};

  if (!args.truth.empty()) {
    const std::vector<diol::AnomalySpec> truth =
        diol::parse_truth_json(slurp(args.truth));
    const diol::DetectionMetrics mk = diol::score_detection(kv, truth);
    const diol::DetectionMetrics mz = diol::score_detection(zv, truth);
    kside["recall"] = mk.recall;
    kside["false_positive_rate"] = mk.false_positive_rate;
    zside["recall"] = mz.recall;
    zside["false_positive_rate"] = mz.false_positive_rate;

    // Interval agreement: both detectors reach the same verdict about
    // each truth interval (detected or missed by both).
    std::size_t same = 0;
    for (const auto& spec : truth) {
      const auto inside = [&spec](const diol::AnomalyVerdict& v) {
        const auto start = std::llround(spec.start_s * 1000.0);
        const auto end = std::llround(spec.end_s() * 1000.0);
        return v.timestamp_ms >= start && v.timestamp_ms <= end && v.is_anomaly;
      };
      const bool dk = std::any_of(kv.begin(), kv.end(), inside);
      const bool dz = std::any_of(zv.begin(), zv.end(), inside);
      same += dk == dz ? 1 : 0;
    }
    summary["intervals"] = truth.size();
    summary["interval_agreement"] =
        truth.empty() ? 1.0
                      : static_cast<double>(same) / static_cast<double>(truth.size());
  }
  summary["kmeans"] = kside;
  summary["zscore"] = zside;
  emit(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Duty-cycle current anomaly detection pipeline"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-data", "Synthesize a current trace");
  gen_cmd->add_option("--out", gen.out, "Sample CSV output path")->required();
  gen_cmd->add_option("--truth", gen.truth, "Ground-truth JSON output path");
  gen_cmd->add_option("--config", gen.config_path, "key=value config file");
  gen_cmd->add_option("--seed", gen.seed, "Override the trace seed");
  gen_cmd->add_option("--duration", gen.duration_s, "Override duration_s");
  gen_cmd->add_option("--suite", gen.suite, "Anomaly suite: none|default");

  TrainArgs train_args;
  CLI::App* train_cmd =
      app.add_subcommand("train", "Train a detector and export the model file");
  train_cmd->add_option("--data", train_args.data, "Sample CSV input")->required();
  train_cmd->add_option("--model", train_args.model, "Model file output path")
      ->required();
  train_cmd->add_option("--config", train_args.config_path, "key=value config file");
  train_cmd->add_option("--features-out", train_args.features_out,
                        "Also write the extracted features CSV");

  InferArgs infer_args;
  CLI::App* infer_cmd =
      app.add_subcommand("infer", "Score a trace against a stored model");
  infer_cmd->add_option("--data", infer_args.data, "Sample CSV input")->required();
  infer_cmd->add_option("--model", infer_args.model, "Model file input")->required();
  infer_cmd->add_option("--config", infer_args.config_path, "key=value config file");
  infer_cmd->add_option("--out", infer_args.out, "Verdict output path");
  infer_cmd->add_option("--format", infer_args.format, "Verdict format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  infer_cmd->add_option("--features-out", infer_args.features_out,
                        "Also write the extracted features CSV");

  DemoArgs demo;
  CLI::App* demo_cmd = app.add_subcommand(
      "diol-demo", "Two-device train/export/load/score round trip");
  demo_cmd->add_option("--model", demo.model, "Model file exchange path")
      ->required();
  demo_cmd->add_option("--data", demo.data,
                       "Sample CSV input (default: generate from config)");
  demo_cmd->add_option("--config", demo.config_path, "key=value config file");
  demo_cmd->add_option("--out-a", demo.out_a, "Device A verdict CSV path");
  demo_cmd->add_option("--out-b", demo.out_b, "Device B verdict CSV path");
  demo_cmd->add_option("--seed", demo.seed,
                       "Override the trace seed (generated data only)");

  TimelineArgs timeline;
  CLI::App* timeline_cmd = app.add_subcommand(
      "timeline", "Join verdicts and features into an operator timeline");
  timeline_cmd->add_option("--verdicts", timeline.verdicts, "Verdict CSV input")
      ->required();
  timeline_cmd->add_option("--features", timeline.features, "Feature CSV input")
      ->required();
  timeline_cmd->add_option("--out", timeline.out, "Timeline CSV output path")
      ->required();

  CompareArgs compare;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "K-Means detector vs Z-Score baseline on one trace");
  compare_cmd->add_option("--data", compare.data, "Sample CSV input")->required();
  compare_cmd->add_option("--truth", compare.truth, "Ground-truth JSON input");
  compare_cmd->add_option("--config", compare.config_path, "key=value config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*train_cmd) return run_train(train_args);
    if (*infer_cmd) return run_infer(infer_args);
    if (*demo_cmd) return run_demo(demo);
    if (*timeline_cmd) return run_timeline(timeline);
    if (*compare_cmd) return run_compare(compare);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable: a subcommand is required
}
