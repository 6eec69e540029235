#include "diol/features.hpp"

#include "diol/errors.hpp"
#include "diol/fp.hpp"
#include "diol/kernels.hpp"

namespace diol {

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = {
      "rms", "rolling_mean", "rolling_std", "rms_slope", "on_duration_s"};
  return names;
}

void FeatureConfig::validate() const {
  if (roll_window < 2) throw Error("roll_window must be >= 2");
  if (!(on_threshold_a > 0.0)) throw Error("on_threshold_a must be positive");
  if (!(record_interval_s > 0.0)) throw Error("record_interval_s must be positive");
}

std::vector<StateLabel> label_states(const std::vector<RmsRecord>& records,
                                     const FeatureConfig& cfg) {
  std::vector<StateLabel> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i].timestamp_ms = records[i].timestamp_ms;
    out[i].state = records[i].rms_a > cfg.on_threshold_a ? State::On : State::Off;
  }
  return out;
}

std::vector<double> rolling_mean(const std::vector<double>& values, std::size_t w) {
  if (w < 1) throw Error("rolling window must be >= 1");
  std::vector<double> out(values.size());
  kernels::omp::rolling_mean(values, w, out);
  return out;
}

std::vector<double> rolling_std(const std::vector<double>& values, std::size_t w) {
  if (w < 1) throw Error("rolling window must be >= 1");
  std::vector<double> out(values.size());
  kernels::omp::rolling_std(values, w, out);
  return out;
}

std::vector<double> rms_slope(const std::vector<double>& values, std::size_t w) {
  if (w < 2) throw Error("slope window must be >= 2");
  std::vector<double> out(values.size());
  kernels::omp::endpoint_slope(values, w, out);
  return out;
}

std::vector<double> on_duration(const std::vector<StateLabel>& labels,
                                const FeatureConfig& cfg) {
  std::vector<double> out(labels.size());
  std::size_t run = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    run = labels[i].state == State::On ? run + 1 : 0;
    out[i] = static_cast<double>(run) * cfg.record_interval_s;
  }
  return out;
}

std::vector<FeatureVector> extract_features(const std::vector<RmsRecord>& records,
                                            const FeatureConfig& cfg) {
  cfg.validate();
  std::vector<double> rms(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) rms[i] = records[i].rms_a;

  std::vector<double> mean = rolling_mean(rms, cfg.roll_window);
  std::vector<double> sd = rolling_std(rms, cfg.roll_window);
  std::vector<double> slope = rms_slope(rms, cfg.roll_window);
  std::vector<double> dur = on_duration(label_states(records, cfg), cfg);

  std::vector<FeatureVector> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i] = {records[i].timestamp_ms, rms[i], mean[i], sd[i], slope[i], dur[i]};
  }
  return out;
}

std::string write_feature_csv(const std::vector<FeatureVector>& features) {
  std::string out = "timestamp_ms,rms,rolling_mean,rolling_std,rms_slope,on_duration_s\n";
  for (const auto& f : features) {
    out += std::to_string(f.timestamp_ms);
    for (double v : f.values()) {
      out.push_back(',');
      out += format_double(v);
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<FeatureVector> parse_feature_csv(std::string_view text) {
  std::vector<FeatureVector> out;
  bool saw_header = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(
        start, end == std::string_view::npos ? text.size() - start : end - start);
    start = end == std::string_view::npos ? text.size() : end + 1;
    ++line_no;

    if (line_no == 1) {
      if (line != "timestamp_ms,rms,rolling_mean,rolling_std,rms_slope,on_duration_s")
        throw CsvError(1, "bad feature CSV header");
      saw_header = true;
      continue;
    }
    FeatureVector f;
    double vals[FeatureVector::kDim];
    std::size_t field = 0;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string_view tok =
          line.substr(pos, comma == std::string_view::npos ? line.size() - pos
                                                           : comma - pos);
      if (field == 0) {
        auto ts = parse_int(tok);
        if (!ts) throw CsvError(line_no, "unparsable timestamp_ms");
        f.timestamp_ms = *ts;
      } else if (field <= FeatureVector::kDim) {
        auto v = parse_double(tok);
        if (!v) throw CsvError(line_no, "unparsable feature value");
        vals[field - 1] = *v;
      } else {
        throw CsvError(line_no, "too many fields");
      }
      ++field;
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (field != FeatureVector::kDim + 1) throw CsvError(line_no, "too few fields");
    f.rms = vals[0];
    f.rolling_mean = vals[1];
    f.rolling_std = vals[2];
    f.rms_slope = vals[3];
    f.on_duration_s = vals[4];
    out.push_back(f);
  }
  if (!saw_header) throw CsvError(1, "missing feature CSV header");
  return out;
}

}  // namespace diol
