#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "diol/features.hpp"

namespace diol {

// Per-feature normalization statistics, in feature units. Standard
// deviations are population deviations over the training subset; an entry
// that comes out (near) zero is replaced by 1.0 so constant features pass
// through unscaled instead of dividing by zero.
struct NormStats {
  std::vector<double> mean;
  std::vector<double> std;

  bool operator==(const NormStats&) const = default;
};

// A trained detector: centroids live in normalized feature space, and a
// record is anomalous when its Euclidean distance to the nearest centroid
// exceeds `threshold`. `scale` is the safety-margin multiplier that was
// already folded into `threshold`; it is carried so a stored model states
// how its boundary was derived.
struct KMeansModel {
  std::size_t k = 0;
  std::size_t dim = 0;
  std::vector<std::vector<double>> centroids;  // k rows of dim values
  NormStats norm;
  double threshold = 0.0;
  double scale = 1.0;
  std::vector<std::string> feature_names;

  bool operator==(const KMeansModel&) const = default;
};

struct TrainConfig {
  std::size_t k = 3;
  int iterations = 3;
  double train_fraction = 0.20;  // chronological prefix, in (0, 1]
  double percentile = 95.0;      // nearest-rank percentile, in (0, 100]
  double scale = 1.0;            // threshold multiplier, > 0

  // Throws diol::Error when a field is out of range.
  void validate() const;
};

struct AnomalyVerdict {
  std::int64_t timestamp_ms = 0;
  int cluster = 0;
  double distance = 0.0;  // Euclidean, normalized space
  bool is_anomaly = false;

  bool operator==(const AnomalyVerdict&) const = default;
};

struct Assignment {
  int cluster = 0;
  double distance = 0.0;  // Euclidean, not squared
};

// Chronological prefix of ceil(fraction * n) records.
std::vector<FeatureVector> select_training_subset(
    const std::vector<FeatureVector>& features, double fraction);

NormStats compute_norm_stats(const std::vector<FeatureVector>& training);

std::array<double, FeatureVector::kDim> normalize(const FeatureVector& v,
                                                  const NormStats& stats);
std::array<double, FeatureVector::kDim> denormalize(
    const std::array<double, FeatureVector::kDim>& z, const NormStats& stats);

// First k points, in order, as the initial centroids.
std::vector<std::vector<double>> init_centroids(
    const std::vector<std::vector<double>>& scaled, std::size_t k);

// Exactly `iterations` Lloyd rounds over `scaled` starting from
// `centroids`: assign each point to the nearest centroid by squared
// Euclidean distance (ties -> smallest index), then recompute each
// centroid as the mean of its members; an empty cluster keeps its
// previous centroid. No convergence check or early exit. All working
// memory is allocated up front, sized by the point count and k only.
std::vector<std::vector<double>> lloyd_iterate(
    const std::vector<std::vector<double>>& scaled,
    std::vector<std::vector<double>> centroids, int iterations);

// Sum of squared distances from each point to its nearest centroid;
// non-increasing across Lloyd rounds.
double sse_objective(const std::vector<std::vector<double>>& scaled,
                     const std::vector<std::vector<double>>& centroids);

// Nearest centroid for one normalized point.
Assignment assign(std::span<const double> z,
                  const std::vector<std::vector<double>>& centroids);

// Nearest-rank percentile of `distances` times `scale`:
// rank = ceil(percentile/100 * n), 1-based index into the ascending order.
double compute_threshold(const std::vector<double>& distances, double percentile,
                         double scale);

// Full training pipeline: chronological subset -> normalization stats ->
// first-k init -> fixed-iteration Lloyd -> percentile threshold.
// Deliberately single-threaded so results are reproducible bit for bit.
// Throws TrainError on non-finite features, a subset smaller than k, or a
// degenerate (non-positive) threshold.
KMeansModel train(const std::vector<FeatureVector>& features,
                  const TrainConfig& cfg);

// Scores every record against the model. Read-only on the model, safe to
// call repeatedly, and parallelized across records.
std::vector<AnomalyVerdict> infer(const std::vector<FeatureVector>& features,
                                  const KMeansModel& model);

// Verdict CSV: header `timestamp_ms,cluster,distance,is_anomaly`, one row
// per verdict, is_anomaly spelled 0/1. Round-trips exactly.
std::string write_verdict_csv(const std::vector<AnomalyVerdict>& verdicts);
std::vector<AnomalyVerdict> parse_verdict_csv(std::string_view text);

}  // namespace diol
