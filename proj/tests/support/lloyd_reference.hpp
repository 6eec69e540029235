#pragma once

#include <cstddef>
#include <limits>
#include <vector>

// Brute-force Lloyd reference, written before and independently of the
// library implementation. Rules: centroids start as the first k points;
// each round assigns every point to the centroid with the smallest
// squared Euclidean distance (ties -> smallest index) and then recomputes
// each centroid as the mean of its assigned points, keeping the previous
// centroid when a cluster receives no points. Exactly `iterations`
// rounds, no convergence check.
namespace testsupport {

inline std::vector<std::vector<double>> reference_lloyd(
    const std::vector<std::vector<double>>& points, std::size_t k, int iterations) {
  std::vector<std::vector<double>> centroids(points.begin(), points.begin() + k);
  const std::size_t dim = centroids.empty() ? 0 : centroids[0].size();

  for (int round = 0; round < iterations; ++round) {
    std::vector<int> member(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      double best_d2 = std::numeric_limits<double>::infinity();
      int best = 0;
      for (std::size_t c = 0; c < k; ++c) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
          double d = points[i][j] - centroids[c][j];
          d2 += d * d;
        }
        if (d2 < best_d2) {
          best_d2 = d2;
          best = static_cast<int>(c);
        }
      }
      member[i] = best;
    }
    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double> sum(dim, 0.0);
      std::size_t count = 0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (member[i] != static_cast<int>(c)) continue;
        for (std::size_t j = 0; j < dim; ++j) sum[j] += points[i][j];
        ++count;
      }
      if (count > 0) {
        for (std::size_t j = 0; j < dim; ++j)
          centroids[c][j] = sum[j] / static_cast<double>(count);
      }
    }
  }
  return centroids;
}

}  // namespace testsupport
