#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Front of the pipeline: raw timestamped current samples in, cleansed
// samples and fixed-window RMS records out.
namespace diol {

struct CurrentSample {
  std::int64_t timestamp_ms = 0;
  double current_a = 0.0;

  bool operator==(const CurrentSample&) const = default;
};

struct RmsRecord {
  std::int64_t timestamp_ms = 0;  // timestamp of the last sample in the window
  double rms_a = 0.0;

  bool operator==(const RmsRecord&) const = default;
};

struct SignalConfig {
  std::size_t window_len = 100;  // samples per RMS window
  std::size_t stride = 100;      // samples between window starts
  double spike_clamp_a = 30.0;   // |current| cap applied during cleansing

  // Throws diol::Error when stride > window_len or spike_clamp_a <= 0.
  void validate() const;
};

struct CleanseStats {
  std::size_t dropped_nonfinite = 0;
  std::size_t dropped_timestamp = 0;
  std::size_t clamped = 0;
};

// Sample CSV: header `timestamp_ms,current_a`, LF line endings, one sample
// per row. Throws CsvError naming the offending 1-based line.
std::vector<CurrentSample> parse_sample_csv(std::string_view text);

std::string write_sample_csv(const std::vector<CurrentSample>& samples);

// Drops non-finite readings, drops timestamps that do not advance past the
// previously retained sample, clamps |current| to spike_clamp_a. Total
// function; stats out-param is optional.
std::vector<CurrentSample> cleanse(const std::vector<CurrentSample>& samples,
                                   const SignalConfig& cfg,
                                   CleanseStats* stats = nullptr);

// One record per full window of window_len samples advancing by stride;
// the trailing partial window is discarded.
std::vector<RmsRecord> compute_rms_windows(const std::vector<CurrentSample>& samples,
                                           const SignalConfig& cfg);

}  // namespace diol
