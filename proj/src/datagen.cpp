#include "diol/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "json.hpp"

#include "diol/errors.hpp"
#include "diol/prng.hpp"

namespace diol {
namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

double clamped_run_length(SplitMix64& rng, double mean, double sd) {
  const double len = mean + sd * rng.gaussian();
  return std::clamp(len, mean - 3.0 * sd, mean + 3.0 * sd);
}

double on_waveform(double t, const TraceConfig& cfg, double noise) {
  return cfg.on_amp_a * std::sin(kTwoPi * cfg.mains_hz * t) + noise;
}

// Sample index range covered by [start_s, end_s): i such that
// start <= i/rate < end.
std::pair<std::size_t, std::size_t> sample_range(double start_s, double end_s,
                                                 double rate, std::size_t n) {
  const auto first = static_cast<std::size_t>(
      std::max(0.0, std::ceil(start_s * rate)));
  const auto end = static_cast<std::size_t>(
      std::max(0.0, std::ceil(end_s * rate)));
  return {std::min(first, n), std::min(end, n)};
}

std::int64_t to_ms(double seconds) {
  return std::llround(seconds * 1000.0);
}

void check_specs(const SyntheticTrace& trace,
                 const std::vector<AnomalySpec>& specs) {
  for (const auto& s : specs) {
    if (!(s.duration_s > 0.0))
      throw Error("anomaly duration must be positive");
    if (s.start_s < 0.0 || s.end_s() > trace.config.duration_s)
      throw Error("anomaly [" + std::to_string(s.start_s) + ", " +
                  std::to_string(s.end_s()) + ") falls outside the trace");
    if (s.kind == AnomalyKind::ShortCycle && !(s.magnitude > 0.0))
      throw Error("short_cycle anomalies need a positive period");
  }
  std::vector<AnomalySpec> all = trace.truth;
  all.insert(all.end(), specs.begin(), specs.end());
  std::sort(all.begin(), all.end(),
            [](const AnomalySpec& a, const AnomalySpec& b) {
              return a.start_s < b.start_s;
            });
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].start_s < all[i - 1].end_s())
      throw Error("anomaly intervals overlap near t=" +
                  std::to_string(all[i].start_s) + "s");
  }
}

}  // namespace

void TraceConfig::validate() const {
  if (!(duration_s > 0.0)) throw Error("duration_s must be positive");
  if (!(sample_rate_hz > 0.0 && sample_rate_hz <= 1000.0))
    throw Error("sample_rate_hz must be in (0, 1000]");
  if (!(mains_hz > 0.0)) throw Error("mains_hz must be positive");
  if (!(on_amp_a > 0.0)) throw Error("on_amp_a must be positive");
  if (!(off_noise_a >= 0.0)) throw Error("off_noise_a must be non-negative");
  if (!(on_sd_s >= 0.0) || !(off_sd_s >= 0.0))
    throw Error("run-length standard deviations must be non-negative");
  if (!(on_mean_s > 3.0 * on_sd_s))
    throw Error("on_mean_s must exceed 3 * on_sd_s");
  if (!(off_mean_s > 3.0 * off_sd_s))
    throw Error("off_mean_s must exceed 3 * off_sd_s");
}

std::string_view to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::ExtendedRuntime: return "extended_runtime";
    case AnomalyKind::ShortCycle: return "short_cycle";
    case AnomalyKind::ProlongedOff: return "prolonged_off";
  }
  return "unknown";
}

std::optional<AnomalyKind> anomaly_kind_from(std::string_view name) {
  if (name == "extended_runtime") return AnomalyKind::ExtendedRuntime;
  if (name == "short_cycle") return AnomalyKind::ShortCycle;
  if (name == "prolonged_off") return AnomalyKind::ProlongedOff;
  return std::nullopt;
}

SyntheticTrace generate_trace(const TraceConfig& cfg) {
  cfg.validate();
  SplitMix64 rng(cfg.seed);

  const auto n = static_cast<std::size_t>(
      std::llround(cfg.duration_s * cfg.sample_rate_hz));
  SyntheticTrace trace;
  trace.config = cfg;
  trace.samples.resize(n);

  bool on = true;  // traces start with the compressor running
  double run_end = clamped_run_length(rng, cfg.on_mean_s, cfg.on_sd_s);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / cfg.sample_rate_hz;
    while (t >= run_end) {
      on = !on;
      run_end += on ? clamped_run_length(rng, cfg.on_mean_s, cfg.on_sd_s)
                    : clamped_run_length(rng, cfg.off_mean_s, cfg.off_sd_s);
    }
    const double noise = cfg.off_noise_a * rng.gaussian();
    trace.samples[i].timestamp_ms = to_ms(t);
    trace.samples[i].current_a = on ? on_waveform(t, cfg, noise) : noise;
  }
  return trace;
}

SyntheticTrace inject_anomalies(const SyntheticTrace& trace,
                                const std::vector<AnomalySpec>& specs) {
  check_specs(trace, specs);

  SyntheticTrace out = trace;
  const double rate = trace.config.sample_rate_hz;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const AnomalySpec& spec = specs[s];
    // Per-spec noise stream, derived from the trace seed and the spec
    // index, so patching one window never perturbs another window's bytes.
    SplitMix64 rng(trace.config.seed ^
                   (0x9E3779B97F4A7C15ull * (s + 1)));
    const auto [first, end] =
        sample_range(spec.start_s, spec.end_s(), rate, out.samples.size());
    for (std::size_t i = first; i < end; ++i) {
      const double t = static_cast<double>(i) / rate;
      const double noise = trace.config.off_noise_a * rng.gaussian();
      double value = noise;
      switch (spec.kind) {
        case AnomalyKind::ExtendedRuntime:
          value = on_waveform(t, trace.config, noise);
          break;
        case AnomalyKind::ShortCycle: {
          const double phase = std::fmod(t - spec.start_s, spec.magnitude);
          value = phase < spec.magnitude / 2.0
                      ? on_waveform(t, trace.config, noise)
                      : noise;
          break;
        }
        case AnomalyKind::ProlongedOff:
          value = noise;
          break;
      }
      out.samples[i].current_a = value;
    }
    out.truth.push_back(spec);
  }
  std::sort(out.truth.begin(), out.truth.end(),
            [](const AnomalySpec& a, const AnomalySpec& b) {
              return a.start_s < b.start_s;
            });
  return out;
}

std::vector<AnomalySpec> default_anomaly_suite(const TraceConfig& cfg,
                                               double train_fraction) {
  cfg.validate();
  if (!(train_fraction > 0.0 && train_fraction <= 1.0))
    throw Error("train_fraction must be in (0, 1]");

  const double er = 3.0 * cfg.on_mean_s;
  const double sc = 2.0 * cfg.on_mean_s;
  const double po = 3.0 * cfg.off_mean_s;
  const double margin = 10.0;  // keep the training prefix and trace tail clean
  const double post_start = train_fraction * cfg.duration_s + margin;
  const double post_end = cfg.duration_s - margin;
  const double total = 2.0 * (er + sc + po);
  const double min_gap = 10.0;
  if (post_end - post_start < total + 5.0 * min_gap)
    throw Error("duration_s too short for the default anomaly suite");
  const double gap = (post_end - post_start - total) / 5.0;

  const AnomalyKind order[] = {AnomalyKind::ExtendedRuntime,
                               AnomalyKind::ShortCycle,
                               AnomalyKind::ProlongedOff};
  const double lengths[] = {er, sc, po};

  std::vector<AnomalySpec> suite;
  double at = post_start;
  for (int repeat = 0; repeat < 2; ++repeat) {
    for (int kind = 0; kind < 3; ++kind) {
      AnomalySpec spec;
      spec.kind = order[kind];
      spec.start_s = at;
      spec.duration_s = lengths[kind];
      spec.magnitude = order[kind] == AnomalyKind::ShortCycle ? 2.0 : 0.0;
      suite.push_back(spec);
      at += lengths[kind] + gap;
    }
  }
  return suite;
}

std::string write_truth_json(const std::vector<AnomalySpec>& truth) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& spec : truth) {
    arr.push_back({{"kind", std::string(to_string(spec.kind))},
                   {"start_ms", to_ms(spec.start_s)},
                   {"end_ms", to_ms(spec.end_s())}});
  }
  return arr.dump(2) + "\n";
}

std::vector<AnomalySpec> parse_truth_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("truth file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error("truth file must hold a JSON array");

  std::vector<AnomalySpec> out;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("kind") ||
        !item.contains("start_ms") || !item.contains("end_ms"))
      throw Error("each truth entry needs kind, start_ms, end_ms");
    const auto kind = anomaly_kind_from(item["kind"].get<std::string>());
    if (!kind)
      throw Error("unknown anomaly kind '" +
                  item["kind"].get<std::string>() + "'");
    const auto start_ms = item["start_ms"].get<std::int64_t>();
    const auto end_ms = item["end_ms"].get<std::int64_t>();
    if (end_ms <= start_ms) throw Error("truth interval must end after it starts");
    AnomalySpec spec;
    spec.kind = *kind;
    spec.start_s = static_cast<double>(start_ms) / 1000.0;
    spec.duration_s = static_cast<double>(end_ms - start_ms) / 1000.0;
    out.push_back(spec);
  }
  std::sort(out.begin(), out.end(),
            [](const AnomalySpec& a, const AnomalySpec& b) {
              return a.start_s < b.start_s;
            });
  return out;
}

DetectionMetrics score_detection(const std::vector<AnomalyVerdict>& verdicts,
                                 const std::vector<AnomalySpec>& truth) {
  DetectionMetrics m;
  m.truth_intervals = truth.size();

  std::vector<std::pair<std::int64_t, std::int64_t>> intervals;
  intervals.reserve(truth.size());
  for (const auto& spec : truth)
    intervals.emplace_back(to_ms(spec.start_s), to_ms(spec.end_s()));
  std::sort(intervals.begin(), intervals.end());

  std::vector<bool> detected(intervals.size(), false);
  std::size_t cursor = 0;
  for (const auto& v : verdicts) {
    while (cursor < intervals.size() && v.timestamp_ms > intervals[cursor].second)
      ++cursor;
    const bool inside = cursor < intervals.size() &&
                        v.timestamp_ms >= intervals[cursor].first &&
                        v.timestamp_ms <= intervals[cursor].second;
    if (inside) {
      if (v.is_anomaly) detected[cursor] = true;
    } else {
      ++m.normal_records;
      if (v.is_anomaly) ++m.flagged_normal_records;
    }
  }

  for (bool d : detected)
    if (d) ++m.detected_intervals;
  m.recall = intervals.empty()
                 ? 1.0
                 : static_cast<double>(m.detected_intervals) /
                       static_cast<double>(intervals.size());
  m.false_positive_rate =
      m.normal_records == 0
          ? 0.0
          : static_cast<double>(m.flagged_normal_records) /
                static_cast<double>(m.normal_records);
  return m;
}

}  // namespace diol
