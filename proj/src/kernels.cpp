#include "diol/kernels.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>

namespace diol::kernels {
namespace {

// Per-element bodies shared by both drivers. Summation order inside a
// window is fixed (ascending index), which is what makes the parallel
// schedule irrelevant to the result.

inline double mean_at(const double* v, std::size_t i, std::size_t w) {
  std::size_t j0 = (i + 1 >= w) ? i + 1 - w : 0;
  double sum = 0.0;
  for (std::size_t j = j0; j <= i; ++j) sum += v[j];
  return sum / static_cast<double>(i - j0 + 1);
}

inline double std_at(const double* v, std::size_t i, std::size_t w) {
  std::size_t j0 = (i + 1 >= w) ? i + 1 - w : 0;
  std::size_t len = i - j0 + 1;
  double sum = 0.0;
  for (std::size_t j = j0; j <= i; ++j) sum += v[j];
  double m = sum / static_cast<double>(len);
  double acc = 0.0;
  for (std::size_t j = j0; j <= i; ++j) {
    double d = v[j] - m;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(len));
}

inline double slope_at(const double* v, std::size_t i, std::size_t w) {
  if (i == 0) return 0.0;
  std::size_t j = (i + 1 >= w) ? i + 1 - w : 0;
  return (v[i] - v[j]) / static_cast<double>(i - j);
}

inline double rms_at(const double* v, std::size_t start, std::size_t window_len) {
  double acc = 0.0;
  for (std::size_t j = start; j < start + window_len; ++j) acc += v[j] * v[j];
  return std::sqrt(acc / static_cast<double>(window_len));
}

inline void score_row(const double* x, std::size_t dim, const double* mean,
                      const double* std_, const double* centroids, std::size_t k,
                      int* out_cluster, double* out_dist) {
  double z[kMaxDim];
  for (std::size_t j = 0; j < dim; ++j) z[j] = (x[j] - mean[j]) / std_[j];
  Nearest n = nearest_centroid(z, centroids, k, dim);
  *out_cluster = n.cluster;
  *out_dist = std::sqrt(n.dist2);
}

inline double max_abs_z_row(const double* x, std::size_t dim, const double* mean,
                            const double* std_) {
  double best = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    double a = std::fabs((x[j] - mean[j]) / std_[j]);
    if (a > best) best = a;
  }
  return best;
}

}  // namespace

namespace serial {

void rolling_mean(std::span<const double> v, std::size_t w, std::span<double> out) {
  assert(w >= 1 && out.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = mean_at(v.data(), i, w);
}

void rolling_std(std::span<const double> v, std::size_t w, std::span<double> out) {
  assert(w >= 1 && out.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std_at(v.data(), i, w);
}

void endpoint_slope(std::span<const double> v, std::size_t w, std::span<double> out) {
  assert(w >= 2 && out.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = slope_at(v.data(), i, w);
}

void rms_windows(std::span<const double> v, std::size_t window_len,
                 std::size_t stride, std::span<double> out) {
  assert(window_len >= 1 && stride >= 1);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = rms_at(v.data(), i * stride, window_len);
}

void score_rows(std::span<const double> rows, std::size_t n, std::size_t dim,
                std::span<const double> mean, std::span<const double> std,
                std::span<const double> centroids, std::size_t k,
                std::span<int> out_cluster, std::span<double> out_dist) {
  assert(dim <= kMaxDim);
  for (std::size_t i = 0; i < n; ++i)
    score_row(rows.data() + i * dim, dim, mean.data(), std.data(),
              centroids.data(), k, &out_cluster[i], &out_dist[i]);
}

void max_abs_z(std::span<const double> rows, std::size_t n, std::size_t dim,
               std::span<const double> mean, std::span<const double> std,
               std::span<double> out_score) {
  for (std::size_t i = 0; i < n; ++i)
    out_score[i] = max_abs_z_row(rows.data() + i * dim, dim, mean.data(), std.data());
}

}  // namespace serial

namespace omp {

void rolling_mean(std::span<const double> v, std::size_t w, std::span<double> out) {
  assert(w >= 1 && out.size() == v.size());
  const std::int64_t n = static_cast<std::int64_t>(v.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = mean_at(v.data(), i, w);
}

void rolling_std(std::span<const double> v, std::size_t w, std::span<double> out) {
  assert(w >= 1 && out.size() == v.size());
  const std::int64_t n = static_cast<std::int64_t>(v.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = std_at(v.data(), i, w);
}

void endpoint_slope(std::span<const double> v, std::size_t w, std::span<double> out) {
  assert(w >= 2 && out.size() == v.size());
  const std::int64_t n = static_cast<std::int64_t>(v.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = slope_at(v.data(), i, w);
}

void rms_windows(std::span<const double> v, std::size_t window_len,
                 std::size_t stride, std::span<double> out) {
  assert(window_len >= 1 && stride >= 1);
  const std::int64_t n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[i] = rms_at(v.data(), static_cast<std::size_t>(i) * stride, window_len);
}

void score_rows(std::span<const double> rows, std::size_t n, std::size_t dim,
                std::span<const double> mean, std::span<const double> std,
                std::span<const double> centroids, std::size_t k,
                std::span<int> out_cluster, std::span<double> out_dist) {
  assert(dim <= kMaxDim);
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nn; ++i)
    score_row(rows.data() + static_cast<std::size_t>(i) * dim, dim, mean.data(),
              std.data(), centroids.data(), k, &out_cluster[i], &out_dist[i]);
}

void max_abs_z(std::span<const double> rows, std::size_t n, std::size_t dim,
               std::span<const double> mean, std::span<const double> std,
               std::span<double> out_score) {
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nn; ++i)
    out_score[i] =
        max_abs_z_row(rows.data() + static_cast<std::size_t>(i) * dim, dim,
                      mean.data(), std.data());
}

}  // namespace omp

}  // namespace diol::kernels
