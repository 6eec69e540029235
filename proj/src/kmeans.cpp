#include "diol/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diol/diagnostics.hpp"
#include "diol/errors.hpp"
#include "diol/fp.hpp"
#include "diol/kernels.hpp"

namespace diol {
namespace {

// Near-zero standard deviations are promoted to 1.0; the cutoff absorbs
// the rounding noise a constant feature column can leave behind.
constexpr double kStdFloor = 1e-12;

std::vector<double> flatten(const std::vector<std::vector<double>>& rows,
                            std::size_t dim, const char* what) {
  std::vector<double> flat(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim)
      throw Error(std::string(what) + ": row " + std::to_string(i) +
                  " has dimension " + std::to_string(rows[i].size()) +
                  ", expected " + std::to_string(dim));
    std::copy(rows[i].begin(), rows[i].end(), flat.begin() + i * dim);
  }
  return flat;
}

void check_dim(std::size_t dim, const char* what) {
  if (dim == 0 || dim > kernels::kMaxDim)
    throw Error(std::string(what) + ": dimension " + std::to_string(dim) +
                " outside [1, " + std::to_string(kernels::kMaxDim) + "]");
}

}  // namespace

void TrainConfig::validate() const {
  if (k < 1 || k > 64) throw Error("k must be in [1, 64]");
  if (iterations < 0) throw Error("iterations must be >= 0");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0))
    throw Error("train_fraction must be in (0, 1]");
  if (!(percentile > 0.0 && percentile <= 100.0))
    throw Error("percentile must be in (0, 100]");
  if (!(scale > 0.0)) throw Error("scale must be positive");
}

std::vector<FeatureVector> select_training_subset(
    const std::vector<FeatureVector>& features, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw Error("train_fraction must be in (0, 1]");
  auto take = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(features.size())));
  take = std::min(take, features.size());
  return {features.begin(), features.begin() + static_cast<std::ptrdiff_t>(take)};
}

NormStats compute_norm_stats(const std::vector<FeatureVector>& training) {
  if (training.empty()) throw Error("compute_norm_stats: empty training set");
  const std::size_t dim = FeatureVector::kDim;
  const auto n = static_cast<double>(training.size());

  NormStats stats{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  for (const auto& f : training) {
    const auto v = f.values();
    for (std::size_t j = 0; j < dim; ++j) stats.mean[j] += v[j];
  }
  for (std::size_t j = 0; j < dim; ++j) stats.mean[j] /= n;
  for (const auto& f : training) {
    const auto v = f.values();
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = v[j] - stats.mean[j];
      stats.std[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    stats.std[j] = std::sqrt(stats.std[j] / n);
    if (!(stats.std[j] > kStdFloor)) stats.std[j] = 1.0;
  }
  return stats;
}

std::array<double, FeatureVector::kDim> normalize(const FeatureVector& v,
                                                  const NormStats& stats) {
  if (stats.mean.size() != FeatureVector::kDim ||
      stats.std.size() != FeatureVector::kDim)
    throw Error("normalize: stats dimension mismatch");
  const auto raw = v.values();
  std::array<double, FeatureVector::kDim> z{};
  for (std::size_t j = 0; j < FeatureVector::kDim; ++j)
    z[j] = (raw[j] - stats.mean[j]) / stats.std[j];
  return z;
}

std::array<double, FeatureVector::kDim> denormalize(
    const std::array<double, FeatureVector::kDim>& z, const NormStats& stats) {
  if (stats.mean.size() != FeatureVector::kDim ||
      stats.std.size() != FeatureVector::kDim)
    throw Error("denormalize: stats dimension mismatch");
  std::array<double, FeatureVector::kDim> raw{};
  for (std::size_t j = 0; j < FeatureVector::kDim; ++j)
    raw[j] = z[j] * stats.std[j] + stats.mean[j];
  return raw;
}

std::vector<std::vector<double>> init_centroids(
    const std::vector<std::vector<double>>& scaled, std::size_t k) {
  if (k < 1) throw Error("init_centroids: k must be >= 1");
  if (scaled.size() < k)
    throw Error("init_centroids: " + std::to_string(scaled.size()) +
                " points cannot seed " + std::to_string(k) + " clusters");
  return {scaled.begin(), scaled.begin() + static_cast<std::ptrdiff_t>(k)};
}

std::vector<std::vector<double>> lloyd_iterate(
    const std::vector<std::vector<double>>& scaled,
    std::vector<std::vector<double>> centroids, int iterations) {
  if (centroids.empty()) throw Error("lloyd_iterate: no centroids");
  if (iterations < 0) throw Error("lloyd_iterate: negative iteration count");
  const std::size_t k = centroids.size();
  const std::size_t dim = centroids[0].size();
  check_dim(dim, "lloyd_iterate");

  // The whole working set is allocated here, before the rounds begin;
  // its size depends only on the point count, k, and dim.
  std::vector<double> pts = flatten(scaled, dim, "lloyd_iterate points");
  std::vector<double> cent = flatten(centroids, dim, "lloyd_iterate centroids");
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  const std::size_t n = scaled.size();

  for (int round = 0; round < iterations; ++round) {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    // Points are folded into their cluster sums in index order, so each
    // cluster sees one fixed addition sequence regardless of layout.
    for (std::size_t i = 0; i < n; ++i) {
      const auto near =
          kernels::nearest_centroid(pts.data() + i * dim, cent.data(), k, dim);
      const auto c = static_cast<std::size_t>(near.cluster);
      const double* p = pts.data() + i * dim;
      for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += p[j];
      ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centroid
      for (std::size_t j = 0; j < dim; ++j)
        cent[c * dim + j] = sums[c * dim + j] / static_cast<double>(counts[c]);
    }
  }

  for (std::size_t c = 0; c < k; ++c)
    std::copy(cent.begin() + static_cast<std::ptrdiff_t>(c * dim),
              cent.begin() + static_cast<std::ptrdiff_t>((c + 1) * dim),
              centroids[c].begin());
  return centroids;
}

double sse_objective(const std::vector<std::vector<double>>& scaled,
                     const std::vector<std::vector<double>>& centroids) {
  if (centroids.empty()) throw Error("sse_objective: no centroids");
  const std::size_t dim = centroids[0].size();
  check_dim(dim, "sse_objective");
  const std::vector<double> cent = flatten(centroids, dim, "sse_objective centroids");

  double acc = 0.0;
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    if (scaled[i].size() != dim)
      throw Error("sse_objective: point dimension mismatch");
    acc += kernels::nearest_centroid(scaled[i].data(), cent.data(),
                                     centroids.size(), dim)
               .dist2;
  }
  return acc;
}

Assignment assign(std::span<const double> z,
                  const std::vector<std::vector<double>>& centroids) {
  if (centroids.empty()) throw Error("assign: no centroids");
  const std::size_t dim = centroids[0].size();
  check_dim(dim, "assign");
  if (z.size() != dim)
    throw Error("assign: point dimension " + std::to_string(z.size()) +
                " does not match centroid dimension " + std::to_string(dim));
  const std::vector<double> cent = flatten(centroids, dim, "assign centroids");
  const auto near =
      kernels::nearest_centroid(z.data(), cent.data(), centroids.size(), dim);
  return {near.cluster, std::sqrt(near.dist2)};
}

double compute_threshold(const std::vector<double>& distances, double percentile,
                         double scale) {
  if (distances.empty()) throw Error("compute_threshold: no distances");
  if (!(percentile > 0.0 && percentile <= 100.0))
    throw Error("percentile must be in (0, 100]");
  if (!(scale > 0.0)) throw Error("scale must be positive");

  const std::size_t n = distances.size();
  auto rank = static_cast<std::size_t>(
      std::ceil(percentile / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);

  std::vector<double> work = distances;
  auto nth = work.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(work.begin(), nth, work.end());
  return *nth * scale;
}

KMeansModel train(const std::vector<FeatureVector>& features,
                  const TrainConfig& cfg) {
  cfg.validate();
  diag::count_train_invocation();
  if (features.empty()) throw TrainError("no feature records to train on");

  const std::vector<FeatureVector> subset =
      select_training_subset(features, cfg.train_fraction);
  if (subset.size() < cfg.k)
    throw TrainError("training subset holds " + std::to_string(subset.size()) +
                     " records, fewer than k=" + std::to_string(cfg.k));
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (double v : subset[i].values()) {
      if (!std::isfinite(v))
        throw TrainError("non-finite feature value in training record " +
                         std::to_string(i) + " (timestamp_ms=" +
                         std::to_string(subset[i].timestamp_ms) + ")");
    }
  }

  NormStats norm = compute_norm_stats(subset);
  std::vector<std::vector<double>> scaled(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const auto z = normalize(subset[i], norm);
    scaled[i].assign(z.begin(), z.end());
  }

  std::vector<std::vector<double>> centroids =
      lloyd_iterate(scaled, init_centroids(scaled, cfg.k), cfg.iterations);

  const std::vector<double> cent =
      flatten(centroids, FeatureVector::kDim, "train centroids");
  std::vector<double> dist(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i)
    dist[i] = std::sqrt(kernels::nearest_centroid(scaled[i].data(), cent.data(),
                                                  cfg.k, FeatureVector::kDim)
                            .dist2);

  const double threshold = compute_threshold(dist, cfg.percentile, cfg.scale);
  if (!(threshold > 0.0))
    throw TrainError(
        "degenerate model: the training-distance percentile is zero, every "
        "record would be flagged");

  KMeansModel model;
  model.k = cfg.k;
  model.dim = FeatureVector::kDim;
  model.centroids = std::move(centroids);
  model.norm = std::move(norm);
  model.threshold = threshold;
  model.scale = cfg.scale;
  model.feature_names = feature_names();
  return model;
}

std::vector<AnomalyVerdict> infer(const std::vector<FeatureVector>& features,
                                  const KMeansModel& model) {
  if (model.k == 0 || model.centroids.size() != model.k)
    throw Error("infer: model has " + std::to_string(model.centroids.size()) +
                " centroid rows for k=" + std::to_string(model.k));
  if (model.dim != FeatureVector::kDim)
    throw Error("infer: model dimension " + std::to_string(model.dim) +
                " does not match the " + std::to_string(FeatureVector::kDim) +
                "-feature pipeline");
  if (model.norm.mean.size() != model.dim || model.norm.std.size() != model.dim)
    throw Error("infer: normalization stats dimension mismatch");
  if (!(model.threshold > 0.0)) throw Error("infer: non-positive threshold");

  const std::size_t n = features.size();
  const std::size_t dim = FeatureVector::kDim;
  std::vector<double> rows(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = features[i].values();
    for (std::size_t j = 0; j < dim; ++j) {
      if (!std::isfinite(v[j]))
        throw Error("infer: non-finite feature value at record " +
                    std::to_string(i) + " (timestamp_ms=" +
                    std::to_string(features[i].timestamp_ms) + ")");
      rows[i * dim + j] = v[j];
    }
  }
  const std::vector<double> cent = flatten(model.centroids, dim, "infer centroids");

  std::vector<int> cluster(n);
  std::vector<double> distance(n);
  kernels::omp::score_rows(rows, n, dim, model.norm.mean, model.norm.std, cent,
                           model.k, cluster, distance);

  std::vector<AnomalyVerdict> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {features[i].timestamp_ms, cluster[i], distance[i],
              distance[i] > model.threshold};
  }
  return out;
}

std::string write_verdict_csv(const std::vector<AnomalyVerdict>& verdicts) {
  std::string out = "timestamp_ms,cluster,distance,is_anomaly\n";
  for (const auto& v : verdicts) {
    out += std::to_string(v.timestamp_ms);
    out.push_back(',');
    out += std::to_string(v.cluster);
    out.push_back(',');
    out += format_double(v.distance);
    out.push_back(',');
    out.push_back(v.is_anomaly ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

std::vector<AnomalyVerdict> parse_verdict_csv(std::string_view text) {
  std::vector<AnomalyVerdict> out;
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
      if (line != "timestamp_ms,cluster,distance,is_anomaly")
        throw CsvError(1, "bad verdict CSV header");
      saw_header = true;
      continue;
    }
    std::string_view tok[4];
    std::size_t field = 0;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      if (field >= 4) throw CsvError(line_no, "too many fields");
      tok[field++] = line.substr(
          pos, comma == std::string_view::npos ? line.size() - pos : comma - pos);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (field != 4) throw CsvError(line_no, "too few fields");

    AnomalyVerdict v;
    auto ts = parse_int(tok[0]);
    if (!ts) throw CsvError(line_no, "unparsable timestamp_ms");
    v.timestamp_ms = *ts;
    auto cl = parse_int(tok[1]);
    if (!cl || *cl < 0) throw CsvError(line_no, "unparsable cluster index");
    v.cluster = static_cast<int>(*cl);
    auto d = parse_double(tok[2]);
    if (!d) throw CsvError(line_no, "unparsable distance");
    v.distance = *d;
    if (tok[3] == "0")
      v.is_anomaly = false;
    else if (tok[3] == "1")
      v.is_anomaly = true;
    else
      throw CsvError(line_no, "is_anomaly must be 0 or 1");
    out.push_back(v);
  }
  if (!saw_header) throw CsvError(1, "missing verdict CSV header");
  return out;
}

}  // namespace diol
