#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

// Independent oracles written directly from the definitions, before the
// library implementations. They favour clarity over speed (full sorts,
// direct per-index summation) so the production code can be checked
// against something that has no shared machinery with it.
namespace testsupport {

// Nearest-rank percentile: rank = ceil(p/100 * n) (1-based), taken from a
// full ascending sort, then multiplied by `scale`.
inline double oracle_percentile(std::vector<double> values, double percentile,
                                double scale) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  auto rank = static_cast<std::size_t>(
      std::ceil(percentile / 100.0 * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return values[rank - 1] * scale;
}

// Trailing-window mean at index i: average of values[i-w+1..i], window
// truncated at the start of the sequence.
inline double oracle_rolling_mean_at(const std::vector<double>& v, std::size_t i,
                                     std::size_t w) {
  const std::size_t begin = (i + 1 >= w) ? i + 1 - w : 0;
  double sum = 0.0;
  for (std::size_t j = begin; j <= i; ++j) sum += v[j];
  return sum / static_cast<double>(i - begin + 1);
}

// Trailing-window population standard deviation at index i.
inline double oracle_rolling_std_at(const std::vector<double>& v, std::size_t i,
                                    std::size_t w) {
  const std::size_t begin = (i + 1 >= w) ? i + 1 - w : 0;
  const double mean = oracle_rolling_mean_at(v, i, w);
  double acc = 0.0;
  for (std::size_t j = begin; j <= i; ++j) {
    const double d = v[j] - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(i - begin + 1));
}

// Endpoint difference quotient over the same trailing window:
// (v[i] - v[begin]) / (i - begin); zero when the window holds one value.
inline double oracle_slope_at(const std::vector<double>& v, std::size_t i,
                              std::size_t w) {
  const std::size_t begin = (i + 1 >= w) ? i + 1 - w : 0;
  if (i == begin) return 0.0;
  return (v[i] - v[begin]) / static_cast<double>(i - begin);
}

// Root mean square of values[first..first+len).
inline double oracle_rms(const std::vector<double>& v, std::size_t first,
                         std::size_t len) {
  double acc = 0.0;
  for (std::size_t j = first; j < first + len; ++j) acc += v[j] * v[j];
  return std::sqrt(acc / static_cast<double>(len));
}

// Mean Euclidean distance interpretation checks use this plain distance.
inline double oracle_distance(const std::vector<double>& a,
                              const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace testsupport
