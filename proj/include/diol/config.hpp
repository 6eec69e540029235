#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "diol/datagen.hpp"
#include "diol/features.hpp"
#include "diol/kmeans.hpp"
#include "diol/signal.hpp"

// One flat `key=value` configuration surface for the whole pipeline.
// Lines are `key = value` (whitespace optional), `#` starts a comment,
// blank lines are skipped, unknown keys are errors. Keys:
//
//   window_len, stride, spike_clamp_a            signal stage
//   roll_window, on_threshold_a,
//   record_interval_s (0 = derive from data)     feature stage
//   k, iterations, train_fraction, percentile,
//   scale                                        detector training
//   z_threshold                                  baseline detector
//   seed, duration_s, sample_rate_hz, mains_hz,
//   on_amp_a, off_noise_a, on_mean_s, on_sd_s,
//   off_mean_s, off_sd_s                         trace generation
//   anomaly_suite (none | default)               trace generation
namespace diol {

struct PipelineConfig {
  SignalConfig signal;
  FeatureConfig features;  // record_interval_s here is resolved, see below
  TrainConfig train;
  TraceConfig trace;
  double z_threshold = 3.0;
  // 0 means "derive from the data": stride samples at the spacing of the
  // first two samples. Anything positive pins it.
  double record_interval_s = 0.0;
  std::string anomaly_suite = "none";
};

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

// Feature config with record_interval_s filled in: the explicit value if
// pinned, else derived from the first two samples. Throws when derivation
// is impossible (fewer than two samples).
FeatureConfig resolved_features(const PipelineConfig& cfg,
                                const std::vector<CurrentSample>& samples);

}  // namespace diol
