#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diol/features.hpp"
#include "diol/kmeans.hpp"

// Two-device exchange: device A trains on its own data and exports the
// model file; device B knows nothing but that file and scores the same
// records. The only channel between them is the serialized model.
namespace diol {

enum class ModelSource { TrainedLocally, LoadedFromFile };

std::string_view to_string(ModelSource source);

struct DeviceReport {
  std::string device_id;
  ModelSource model_source = ModelSource::TrainedLocally;
  std::vector<AnomalyVerdict> verdicts;
  std::map<std::string, double> timing_ms;  // "train" / "parse" / "infer"
};

// Trains on `features`, writes the model file to `model_out`, then scores
// all records with the in-memory model. Throws on training failure or an
// unwritable path.
DeviceReport run_device_a(const std::vector<FeatureVector>& features,
                          const TrainConfig& cfg,
                          const std::filesystem::path& model_out);

// Reads and parses the model file, then scores all records. Never trains.
// Throws ModelFormatError on a rejected file (leaving no partial state)
// and diol::Error on an unreadable path.
DeviceReport run_device_b(const std::filesystem::path& model_in,
                          const std::vector<FeatureVector>& features);

struct EquivalenceResult {
  bool identical = false;  // every flag equal and every distance bit-equal
  std::size_t records = 0;
  std::size_t flag_mismatches = 0;
  double max_distance_delta = 0.0;
  std::optional<std::int64_t> first_divergence_ms;  // set iff not identical
};

// Record-by-record comparison of two reports over the same records. The
// verdict sequences must cover identical timestamps, else this throws:
// that is an operating error, not a model discrepancy.
EquivalenceResult verify_equivalence(const DeviceReport& a,
                                     const DeviceReport& b);

}  // namespace diol
