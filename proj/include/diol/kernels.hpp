#pragma once

#include <cstddef>
#include <limits>
#include <span>

// Data-parallel inner loops of the pipeline. Each output element is
// computed from scratch by a fixed per-element operation, so the omp
// variants are bitwise identical to the serial references at any thread
// count. The serial namespace is the reference the tests compare against;
// tools/bench_kernels times the two side by side.
namespace diol::kernels {

inline constexpr std::size_t kMaxDim = 32;

struct Nearest {
  int cluster;
  double dist2;
};

// Nearest centroid by Euclidean distance. Comparisons are on squared
// distances; a strictly smaller distance is required to displace the
// current best, so ties resolve to the smallest index.
inline Nearest nearest_centroid(const double* z, const double* centroids,
                                std::size_t k, std::size_t dim) {
  Nearest best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t c = 0; c < k; ++c) {
    const double* row = centroids + c * dim;
    double d2 = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      double d = z[j] - row[j];
      d2 += d * d;
    }
    if (d2 < best.dist2) {
      best.dist2 = d2;
      best.cluster = static_cast<int>(c);
    }
  }
  return best;
}

namespace serial {

// Trailing-window mean: out[i] = mean(v[max(0,i-w+1) .. i]).
void rolling_mean(std::span<const double> v, std::size_t w, std::span<double> out);

// Population standard deviation over the same trailing window.
void rolling_std(std::span<const double> v, std::size_t w, std::span<double> out);

// Endpoint difference quotient: (v[i] - v[j]) / (i - j), j = max(0, i-w+1).
void endpoint_slope(std::span<const double> v, std::size_t w, std::span<double> out);

// RMS of each full window of window_len values advancing by stride.
void rms_windows(std::span<const double> v, std::size_t window_len,
                 std::size_t stride, std::span<double> out);

// Normalize each row with (mean, std), assign to the nearest of k
// centroids, write index and Euclidean distance.
void score_rows(std::span<const double> rows, std::size_t n, std::size_t dim,
                std::span<const double> mean, std::span<const double> std,
                std::span<const double> centroids, std::size_t k,
                std::span<int> out_cluster, std::span<double> out_dist);

// Max absolute z-score per row.
void max_abs_z(std::span<const double> rows, std::size_t n, std::size_t dim,
               std::span<const double> mean, std::span<const double> std,
               std::span<double> out_score);

}  // namespace serial

namespace omp {

void rolling_mean(std::span<const double> v, std::size_t w, std::span<double> out);
void rolling_std(std::span<const double> v, std::size_t w, std::span<double> out);
void endpoint_slope(std::span<const double> v, std::size_t w, std::span<double> out);
void rms_windows(std::span<const double> v, std::size_t window_len,
                 std::size_t stride, std::span<double> out);
void score_rows(std::span<const double> rows, std::size_t n, std::size_t dim,
                std::span<const double> mean, std::span<const double> std,
                std::span<const double> centroids, std::size_t k,
                std::span<int> out_cluster, std::span<double> out_dist);
void max_abs_z(std::span<const double> rows, std::size_t n, std::size_t dim,
               std::span<const double> mean, std::span<const double> std,
               std::span<double> out_score);

}  // namespace omp

}  // namespace diol::kernels
