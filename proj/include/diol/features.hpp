#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "diol/signal.hpp"

// Compressor state labeling and the five-dimensional feature vectors fed
// to the detectors.
namespace diol {

enum class State { Off, On };

struct StateLabel {
  std::int64_t timestamp_ms = 0;
  State state = State::Off;
};

struct FeatureVector {
  std::int64_t timestamp_ms = 0;
  double rms = 0.0;           // amperes
  double rolling_mean = 0.0;  // amperes
  double rolling_std = 0.0;   // amperes
  double rms_slope = 0.0;     // amperes per record
  double on_duration_s = 0.0; // seconds of the current ON run

  static constexpr std::size_t kDim = 5;

  std::array<double, kDim> values() const {
    return {rms, rolling_mean, rolling_std, rms_slope, on_duration_s};
  }

  bool operator==(const FeatureVector&) const = default;
};

// Canonical feature order; also the FEATURES line of the model file.
const std::vector<std::string>& feature_names();

struct FeatureConfig {
  std::size_t roll_window = 10;   // records, for rolling mean/std/slope
  double on_threshold_a = 0.3;    // amperes, ON iff rms strictly above
  double record_interval_s = 1.0; // seconds between consecutive records

  void validate() const;
};

// ON iff rms_a > on_threshold_a (strict, so the boundary case is OFF).
std::vector<StateLabel> label_states(const std::vector<RmsRecord>& records,
                                     const FeatureConfig& cfg);

// Trailing-window statistics; warm-up windows shrink to the available
// prefix so every index yields a finite value.
std::vector<double> rolling_mean(const std::vector<double>& values, std::size_t w);
std::vector<double> rolling_std(const std::vector<double>& values, std::size_t w);

// Endpoint difference quotient over the trailing window; index 0 is 0.
std::vector<double> rms_slope(const std::vector<double>& values, std::size_t w);

// record_interval_s times the length of the ON run ending at each index;
// 0 on OFF records. Inherently sequential.
std::vector<double> on_duration(const std::vector<StateLabel>& labels,
                                const FeatureConfig& cfg);

// Composes the above over the RMS stream, aligned by timestamp.
std::vector<FeatureVector> extract_features(const std::vector<RmsRecord>& records,
                                            const FeatureConfig& cfg);

// Feature CSV export/import:
// header `timestamp_ms,rms,rolling_mean,rolling_std,rms_slope,on_duration_s`.
std::string write_feature_csv(const std::vector<FeatureVector>& features);
std::vector<FeatureVector> parse_feature_csv(std::string_view text);

}  // namespace diol
