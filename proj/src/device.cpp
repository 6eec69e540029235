#include "diol/device.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "diol/model_format.hpp"

namespace diol {
namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::string_view to_string(ModelSource source) {
  return source == ModelSource::TrainedLocally ? "trained_locally"
                                               : "loaded_from_file";
}

DeviceReport run_device_a(const std::vector<FeatureVector>& features,
                          const TrainConfig& cfg,
                          const std::filesystem::path& model_out) {
  DeviceReport report;
  report.device_id = "device-a";
  report.model_source = ModelSource::TrainedLocally;

  auto t0 = std::chrono::steady_clock::now();
  const KMeansModel model = train(features, cfg);
  report.timing_ms["train"] = ms_since(t0);

  const std::string text = serialize(model);
  std::ofstream out(model_out, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out)
    throw Error("cannot write model file '" + model_out.string() + "'");

  t0 = std::chrono::steady_clock::now();
  report.verdicts = infer(features, model);
  report.timing_ms["infer"] = ms_since(t0);
  return report;
}

DeviceReport run_device_b(const std::filesystem::path& model_in,
                          const std::vector<FeatureVector>& features) {
  std::ifstream in(model_in, std::ios::binary);
  if (!in)
    throw Error("cannot read model file '" + model_in.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  DeviceReport report;
  report.device_id = "device-b";
  report.model_source = ModelSource::LoadedFromFile;

  auto t0 = std::chrono::steady_clock::now();
  auto parsed = parse(text);
  report.timing_ms["parse"] = ms_since(t0);
  if (const auto* err = std::get_if<ParseError>(&parsed))
    throw ModelFormatError(*err);
  const KMeansModel& model = std::get<ModelDocument>(parsed).model;

  t0 = std::chrono::steady_clock::now();
  report.verdicts = infer(features, model);
  report.timing_ms["infer"] = ms_since(t0);
  return report;
}

EquivalenceResult verify_equivalence(const DeviceReport& a,
                                     const DeviceReport& b) {
  if (a.verdicts.size() != b.verdicts.size())
    throw Error("reports cover " + std::to_string(a.verdicts.size()) + " vs " +
                std::to_string(b.verdicts.size()) +
                " records; equivalence needs the same records");
  for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
    if (a.verdicts[i].timestamp_ms != b.verdicts[i].timestamp_ms)
      throw Error("reports diverge in record timestamps at index " +
                  std::to_string(i) + "; equivalence needs the same records");
  }

  EquivalenceResult result;
  result.records = a.verdicts.size();
  for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
    const auto& va = a.verdicts[i];
    const auto& vb = b.verdicts[i];
    const double delta = std::fabs(va.distance - vb.distance);
    const bool flags_differ = va.is_anomaly != vb.is_anomaly;
    if (flags_differ) ++result.flag_mismatches;
    result.max_distance_delta = std::max(result.max_distance_delta, delta);
    if ((flags_differ || delta != 0.0 || va.cluster != vb.cluster) &&
        !result.first_divergence_ms)
      result.first_divergence_ms = va.timestamp_ms;
  }
  result.identical =
      result.flag_mismatches == 0 && !result.first_divergence_ms;
  return result;
}

}  // namespace diol
