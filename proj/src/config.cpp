#include "diol/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "diol/errors.hpp"
#include "diol/fp.hpp"

namespace diol {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error("config line " + std::to_string(line) + ": " + msg);
}

double real_value(int line, std::string_view key, std::string_view tok) {
  const auto v = parse_double(tok);
  if (!v || !std::isfinite(*v))
    fail(line, "value for " + std::string(key) + " is not a finite real");
  return *v;
}

std::int64_t int_value(int line, std::string_view key, std::string_view tok) {
  const auto v = parse_int(tok);
  if (!v) fail(line, "value for " + std::string(key) + " is not an integer");
  return *v;
}

std::size_t size_value(int line, std::string_view key, std::string_view tok) {
  const auto v = int_value(line, key, tok);
  if (v < 1) fail(line, std::string(key) + " must be >= 1");
  return static_cast<std::size_t>(v);
}

}  // namespace

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::string_view raw = text.substr(
        start, end == std::string_view::npos ? text.size() - start : end - start);
    ++line_no;
    const bool last = end == std::string_view::npos;
    start = last ? text.size() + 1 : end + 1;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(line_no, "expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view val = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (val.empty()) fail(line_no, "empty value for " + std::string(key));

    if (key == "window_len") {
      cfg.signal.window_len = size_value(line_no, key, val);
    } else if (key == "stride") {
      cfg.signal.stride = size_value(line_no, key, val);
    } else if (key == "spike_clamp_a") {
      cfg.signal.spike_clamp_a = real_value(line_no, key, val);
    } else if (key == "roll_window") {
      cfg.features.roll_window = size_value(line_no, key, val);
    } else if (key == "on_threshold_a") {
      cfg.features.on_threshold_a = real_value(line_no, key, val);
    } else if (key == "record_interval_s") {
      cfg.record_interval_s = real_value(line_no, key, val);
      if (cfg.record_interval_s < 0.0)
        fail(line_no, "record_interval_s must be >= 0 (0 derives it)");
    } else if (key == "k") {
      cfg.train.k = size_value(line_no, key, val);
    } else if (key == "iterations") {
      const auto v = int_value(line_no, key, val);
      if (v < 0) fail(line_no, "iterations must be >= 0");
      cfg.train.iterations = static_cast<int>(v);
    } else if (key == "train_fraction") {
      cfg.train.train_fraction = real_value(line_no, key, val);
    } else if (key == "percentile") {
      cfg.train.percentile = real_value(line_no, key, val);
    } else if (key == "scale") {
      cfg.train.scale = real_value(line_no, key, val);
    } else if (key == "z_threshold") {
      cfg.z_threshold = real_value(line_no, key, val);
      if (!(cfg.z_threshold > 0.0)) fail(line_no, "z_threshold must be positive");
    } else if (key == "seed") {
      const auto v = int_value(line_no, key, val);
      if (v < 0) fail(line_no, "seed must be >= 0");
      cfg.trace.seed = static_cast<std::uint64_t>(v);
    } else if (key == "duration_s") {
      cfg.trace.duration_s = real_value(line_no, key, val);
    } else if (key == "sample_rate_hz") {
      cfg.trace.sample_rate_hz = real_value(line_no, key, val);
    } else if (key == "mains_hz") {
      cfg.trace.mains_hz = real_value(line_no, key, val);
    } else if (key == "on_amp_a") {
      cfg.trace.on_amp_a = real_value(line_no, key, val);
    } else if (key == "off_noise_a") {
      cfg.trace.off_noise_a = real_value(line_no, key, val);
    } else if (key == "on_mean_s") {
      cfg.trace.on_mean_s = real_value(line_no, key, val);
    } else if (key == "on_sd_s") {
      cfg.trace.on_sd_s = real_value(line_no, key, val);
    } else if (key == "off_mean_s") {
      cfg.trace.off_mean_s = real_value(line_no, key, val);
    } else if (key == "off_sd_s") {
      cfg.trace.off_sd_s = real_value(line_no, key, val);
    } else if (key == "anomaly_suite") {
      if (val != "none" && val != "default")
        fail(line_no, "anomaly_suite must be 'none' or 'default'");
      cfg.anomaly_suite = std::string(val);
    } else {
      fail(line_no, "unknown config key '" + std::string(key) + "'");
    }
    if (last) break;
  }

  // Surface range errors at load time rather than mid-pipeline.
  cfg.signal.validate();
  cfg.train.validate();
  cfg.trace.validate();
  if (cfg.features.roll_window < 2) throw Error("roll_window must be >= 2");
  if (!(cfg.features.on_threshold_a > 0.0))
    throw Error("on_threshold_a must be positive");
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

FeatureConfig resolved_features(const PipelineConfig& cfg,
                                const std::vector<CurrentSample>& samples) {
  FeatureConfig out = cfg.features;
  if (cfg.record_interval_s > 0.0) {
    out.record_interval_s = cfg.record_interval_s;
  } else {
    if (samples.size() < 2)
      throw Error(
          "cannot derive record_interval_s from fewer than two samples; set "
          "record_interval_s in the config");
    const double dt_ms =
        static_cast<double>(samples[1].timestamp_ms - samples[0].timestamp_ms);
    out.record_interval_s =
        static_cast<double>(cfg.signal.stride) * dt_ms / 1000.0;
  }
  out.validate();
  return out;
}

}  // namespace diol
