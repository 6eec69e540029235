#include "diol/zscore.hpp"

#include <cmath>
#include <string>

#include "diol/diagnostics.hpp"
#include "diol/errors.hpp"
#include "diol/kernels.hpp"

namespace diol {

void ZScoreConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0))
    throw Error("train_fraction must be in (0, 1]");
  if (!(z_threshold > 0.0)) throw Error("z_threshold must be positive");
}

ZScoreModel train_zscore(const std::vector<FeatureVector>& features,
                         const ZScoreConfig& cfg) {
  cfg.validate();
  diag::count_train_invocation();
  if (features.empty()) throw TrainError("no feature records to train on");

  const std::vector<FeatureVector> subset =
      select_training_subset(features, cfg.train_fraction);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (double v : subset[i].values()) {
      if (!std::isfinite(v))
        throw TrainError("non-finite feature value in training record " +
                         std::to_string(i) + " (timestamp_ms=" +
                         std::to_string(subset[i].timestamp_ms) + ")");
    }
  }
  return {compute_norm_stats(subset), cfg.z_threshold};
}

std::vector<AnomalyVerdict> infer_zscore(const std::vector<FeatureVector>& features,
                                         const ZScoreModel& model) {
  if (model.norm.mean.size() != FeatureVector::kDim ||
      model.norm.std.size() != FeatureVector::kDim)
    throw Error("infer_zscore: normalization stats dimension mismatch");
  if (!(model.z_threshold > 0.0))
    throw Error("infer_zscore: non-positive z_threshold");

  const std::size_t n = features.size();
  const std::size_t dim = FeatureVector::kDim;
  std::vector<double> rows(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = features[i].values();
    for (std::size_t j = 0; j < dim; ++j) {
      if (!std::isfinite(v[j]))
        throw Error("infer_zscore: non-finite feature value at record " +
                    std::to_string(i) + " (timestamp_ms=" +
                    std::to_string(features[i].timestamp_ms) + ")");
      rows[i * dim + j] = v[j];
    }
  }

  std::vector<double> score(n);
  kernels::omp::max_abs_z(rows, n, dim, model.norm.mean, model.norm.std, score);

  std::vector<AnomalyVerdict> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Recover which feature attained the max; the expression matches the
    // kernel's, so the comparison is exact.
    int which = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double z = (rows[i * dim + j] - model.norm.mean[j]) / model.norm.std[j];
      if (std::fabs(z) == score[i]) {
        which = static_cast<int>(j);
        break;
      }
    }
    out[i] = {features[i].timestamp_ms, which, score[i],
              score[i] > model.z_threshold};
  }
  return out;
}

}  // namespace diol
