#pragma once

#include <vector>

#include "diol/features.hpp"
#include "diol/kmeans.hpp"

// Z-Score baseline detector: a record is anomalous when any feature sits
// more than z_threshold population standard deviations from its training
// mean. Shares the verdict type with the K-Means detector so the two can
// be compared record for record; it is in-process only and has no file
// format (the model file's TYPE field is reserved for KMEANS).
namespace diol {

struct ZScoreConfig {
  double train_fraction = 0.20;  // chronological prefix, in (0, 1]
  double z_threshold = 3.0;      // standard deviations, > 0

  void validate() const;
};

struct ZScoreModel {
  NormStats norm;
  double z_threshold = 3.0;

  bool operator==(const ZScoreModel&) const = default;
};

// Mean/std over the chronological training prefix. Throws TrainError on an
// empty input or non-finite training features.
ZScoreModel train_zscore(const std::vector<FeatureVector>& features,
                         const ZScoreConfig& cfg);

// Scores every record: distance = max_j |z_j|, cluster = the feature index
// that attains it (smallest index on ties), is_anomaly = distance above
// the threshold. Parallelized across records.
std::vector<AnomalyVerdict> infer_zscore(const std::vector<FeatureVector>& features,
                                         const ZScoreModel& model);

}  // namespace diol
