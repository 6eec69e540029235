#include "diol/signal.hpp"

#include <cmath>

#include "diol/errors.hpp"
#include "diol/fp.hpp"
#include "diol/kernels.hpp"

namespace diol {
namespace {

constexpr std::string_view kSampleHeader = "timestamp_ms,current_a";

// Calls fn(line_number, line) for every LF-terminated line; a trailing
// fragment without a final newline counts as a line too.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) fn(++line_no, text.substr(start));
      break;
    }
    fn(++line_no, text.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace

void SignalConfig::validate() const {
  if (window_len == 0) throw Error("window_len must be positive");
  if (stride == 0) throw Error("stride must be positive");
  if (stride > window_len) throw Error("stride must not exceed window_len");
  if (!(spike_clamp_a > 0.0)) throw Error("spike_clamp_a must be positive");
}

std::vector<CurrentSample> parse_sample_csv(std::string_view text) {
  std::vector<CurrentSample> out;
  bool saw_header = false;
  for_each_line(text, [&](int line_no, std::string_view line) {
    if (line.find('\r') != std::string_view::npos)
      throw CsvError(line_no, "carriage return not allowed (LF endings required)");
    if (line_no == 1) {
      if (line != kSampleHeader)
        throw CsvError(1, "expected header '" + std::string(kSampleHeader) + "'");
      saw_header = true;
      return;
    }
    std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw CsvError(line_no, "expected 2 comma-separated fields");
    auto ts = parse_int(line.substr(0, comma));
    if (!ts) throw CsvError(line_no, "unparsable timestamp_ms");
    auto cur = parse_double(line.substr(comma + 1));
    if (!cur) throw CsvError(line_no, "unparsable current_a");
    out.push_back({*ts, *cur});
  });
  if (!saw_header)
    throw CsvError(1, "missing header '" + std::string(kSampleHeader) + "'");
  return out;
}

std::string write_sample_csv(const std::vector<CurrentSample>& samples) {
  std::string out(kSampleHeader);
  out.push_back('\n');
  for (const auto& s : samples) {
    out += std::to_string(s.timestamp_ms);
    out.push_back(',');
    out += format_double(s.current_a);
    out.push_back('\n');
  }
  return out;
}

std::vector<CurrentSample> cleanse(const std::vector<CurrentSample>& samples,
                                   const SignalConfig& cfg, CleanseStats* stats) {
  cfg.validate();
  CleanseStats local;
  std::vector<CurrentSample> out;
  out.reserve(samples.size());
  bool have_prev = false;
  std::int64_t prev_ts = 0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.current_a)) {
      ++local.dropped_nonfinite;
      continue;
    }
    if (have_prev && s.timestamp_ms <= prev_ts) {
      ++local.dropped_timestamp;
      continue;
    }
    double c = s.current_a;
    if (std::fabs(c) > cfg.spike_clamp_a) {
      c = std::copysign(cfg.spike_clamp_a, c);
      ++local.clamped;
    }
    out.push_back({s.timestamp_ms, c});
    prev_ts = s.timestamp_ms;
    have_prev = true;
  }
  if (stats) *stats = local;
  return out;
}

std::vector<RmsRecord> compute_rms_windows(const std::vector<CurrentSample>& samples,
                                           const SignalConfig& cfg) {
  cfg.validate();
  if (samples.size() < cfg.window_len) return {};
  std::size_t count = (samples.size() - cfg.window_len) / cfg.stride + 1;

  std::vector<double> currents(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) currents[i] = samples[i].current_a;

  std::vector<double> rms(count);
  kernels::omp::rms_windows(currents, cfg.window_len, cfg.stride, rms);

  std::vector<RmsRecord> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].timestamp_ms = samples[i * cfg.stride + cfg.window_len - 1].timestamp_ms;
    out[i].rms_a = rms[i];
  }
  return out;
}

}  // namespace diol
