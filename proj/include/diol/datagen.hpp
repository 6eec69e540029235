#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diol/kmeans.hpp"
#include "diol/signal.hpp"

// Synthetic compressor current traces with ground-truth anomaly intervals.
// Everything is driven by SplitMix64 from the seed, so a trace regenerates
// byte-identically from its config.
namespace diol {

struct TraceConfig {
  std::uint64_t seed = 1;
  double duration_s = 1000.0;
  double sample_rate_hz = 25.0;  // <= 1000 so ms timestamps stay strictly increasing
  double mains_hz = 60.0;        // sine frequency while the compressor runs
  double on_amp_a = 1.2;         // sine amplitude while ON
  double off_noise_a = 0.05;     // gaussian sensor noise sigma, always present
  double on_mean_s = 30.0;       // ON run length distribution (clamped at +-3 sd)
  double on_sd_s = 3.0;
  double off_mean_s = 20.0;      // OFF run length distribution (clamped at +-3 sd)
  double off_sd_s = 3.0;

  // Throws diol::Error when a field is out of range. Run-length means must
  // exceed three standard deviations so clamped lengths stay positive.
  void validate() const;
};

enum class AnomalyKind { ExtendedRuntime, ShortCycle, ProlongedOff };

std::string_view to_string(AnomalyKind kind);
std::optional<AnomalyKind> anomaly_kind_from(std::string_view name);

struct AnomalySpec {
  AnomalyKind kind = AnomalyKind::ExtendedRuntime;
  double start_s = 0.0;
  double duration_s = 0.0;
  // ShortCycle: full cycle period in seconds (half ON, half OFF). Unused
  // (0) for the other kinds.
  double magnitude = 0.0;

  double end_s() const { return start_s + duration_s; }

  bool operator==(const AnomalySpec&) const = default;
};

struct SyntheticTrace {
  TraceConfig config;
  std::vector<CurrentSample> samples;
  std::vector<AnomalySpec> truth;  // sorted by start_s, pairwise disjoint
};

// Normal duty-cycle trace: alternating ON (mains sine plus noise) and OFF
// (noise only) runs, starting ON, with run lengths drawn from the clamped
// normal distributions.
SyntheticTrace generate_trace(const TraceConfig& cfg);

// Copy of `trace` with samples in each [start_s, end_s) window replaced by
// the anomalous waveform; the spec is appended to the truth. Each spec
// draws its noise from its own seed derived from (config seed, spec index),
// so injections do not disturb one another. Specs must lie inside the
// trace and be disjoint from each other and from the existing truth.
SyntheticTrace inject_anomalies(const SyntheticTrace& trace,
                                const std::vector<AnomalySpec>& specs);

// Two intervals of each kind, spaced evenly after the chronological
// training prefix (with a settling margin), sized so every kind is
// detectable: extended runtime 3x the mean ON run, short cycle 2x with a
// 2 s period, prolonged off 3x the mean OFF run. Throws when the trace is
// too short to hold the suite.
std::vector<AnomalySpec> default_anomaly_suite(const TraceConfig& cfg,
                                               double train_fraction = 0.20);

// Ground-truth JSON: an array of {"kind", "start_ms", "end_ms"} objects.
// Millisecond intervals are closed ([start_ms, end_ms]); magnitude is a
// generation detail and is not stored.
std::string write_truth_json(const std::vector<AnomalySpec>& truth);
std::vector<AnomalySpec> parse_truth_json(std::string_view text);

struct DetectionMetrics {
  std::size_t truth_intervals = 0;
  std::size_t detected_intervals = 0;  // >= 1 flagged verdict inside
  double recall = 1.0;                 // detected / truth (1.0 when no truth)
  std::size_t normal_records = 0;      // verdicts outside every interval
  std::size_t flagged_normal_records = 0;
  double false_positive_rate = 0.0;    // flagged_normal / normal (0 when none)
};

// Verdicts must be in timestamp order (as infer produces them).
DetectionMetrics score_detection(const std::vector<AnomalyVerdict>& verdicts,
                                 const std::vector<AnomalySpec>& truth);

}  // namespace diol
