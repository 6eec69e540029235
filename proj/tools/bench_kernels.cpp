// Times the serial reference kernels against the OpenMP drivers on the
// same inputs, after first checking that the two paths produce identical
// bytes. Wall times are best-of-N.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "diol/kernels.hpp"
#include "diol/prng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

namespace kern = diol::kernels;

template <class F>
double best_of_ms(int reps, F&& body) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    if (ms < best) best = ms;
  }
  return best;
}

bool bytes_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct Row {
  std::string name;
  double serial_ms;
  double omp_ms;
  bool identical;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  std::size_t n = 2'000'000;
  int reps = 5;
  int threads = 0;
  app.add_option("--n", n, "input length in samples")->check(CLI::PositiveNumber);
  app.add_option("--reps", reps, "repetitions per kernel (best-of)")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP thread count (0 = default)");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
  int used_threads = 1;
#pragma omp parallel
  {
#pragma omp single
    used_threads = omp_get_num_threads();
  }
  std::printf("openmp: yes, threads=%d\n", used_threads);
#else
  (void)threads;
  std::printf("openmp: no (serial drivers on both sides)\n");
#endif
  std::printf("n=%zu, best of %d runs\n\n", n, reps);

  diol::SplitMix64 rng(42);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform01() * 2.0 - 1.0;

  const std::size_t w = 10;
  const std::size_t window_len = 100;
  const std::size_t stride = 100;
  const std::size_t windows = n >= window_len ? (n - window_len) / stride + 1 : 0;

  const std::size_t dim = 5;
  const std::size_t rows_n = n / 20;
  std::vector<double> rows(rows_n * dim);
  for (auto& x : rows) x = rng.uniform01() * 4.0 - 2.0;
  const std::vector<double> mean(dim, 0.1);
  const std::vector<double> stdev(dim, 0.9);
  const std::size_t k = 3;
  std::vector<double> centroids(k * dim);
  for (auto& x : centroids) x = rng.uniform01() * 2.0 - 1.0;

  std::vector<Row> table;
  auto bench_vec = [&](const std::string& name, auto serial_fn, auto omp_fn,
                       std::size_t out_len) {
    std::vector<double> out_s(out_len);
    std::vector<double> out_o(out_len);
    serial_fn(out_s);
    omp_fn(out_o);
    const bool same = bytes_equal(out_s, out_o);
    const double s_ms = best_of_ms(reps, [&] { serial_fn(out_s); });
    const double o_ms = best_of_ms(reps, [&] { omp_fn(out_o); });
    table.push_back({name, s_ms, o_ms, same});
  };

  bench_vec(
      "rolling_mean",
      [&](std::vector<double>& out) { kern::serial::rolling_mean(v, w, out); },
      [&](std::vector<double>& out) { kern::omp::rolling_mean(v, w, out); }, n);
  bench_vec(
      "rolling_std",
      [&](std::vector<double>& out) { kern::serial::rolling_std(v, w, out); },
      [&](std::vector<double>& out) { kern::omp::rolling_std(v, w, out); }, n);
  bench_vec(
      "endpoint_slope",
      [&](std::vector<double>& out) { kern::serial::endpoint_slope(v, w, out); },
      [&](std::vector<double>& out) { kern::omp::endpoint_slope(v, w, out); }, n);
  bench_vec(
      "rms_windows",
      [&](std::vector<double>& out) {
        kern::serial::rms_windows(v, window_len, stride, out);
      },
      [&](std::vector<double>& out) {
        kern::omp::rms_windows(v, window_len, stride, out);
      },
      windows);
  bench_vec(
      "max_abs_z",
      [&](std::vector<double>& out) {
        kern::serial::max_abs_z(rows, rows_n, dim, mean, stdev, out);
      },
      [&](std::vector<double>& out) {
        kern::omp::max_abs_z(rows, rows_n, dim, mean, stdev, out);
      },
      rows_n);

  // score_rows has two outputs; handled separately.
  {
    std::vector<int> cl_s(rows_n);
    std::vector<int> cl_o(rows_n);
    std::vector<double> d_s(rows_n);
    std::vector<double> d_o(rows_n);
    kern::serial::score_rows(rows, rows_n, dim, mean, stdev, centroids, k, cl_s, d_s);
    kern::omp::score_rows(rows, rows_n, dim, mean, stdev, centroids, k, cl_o, d_o);
    const bool same =
        bytes_equal(d_s, d_o) &&
        std::memcmp(cl_s.data(), cl_o.data(), rows_n * sizeof(int)) == 0;
    const double s_ms = best_of_ms(reps, [&] {
      kern::serial::score_rows(rows, rows_n, dim, mean, stdev, centroids, k, cl_s, d_s);
    });
    const double o_ms = best_of_ms(reps, [&] {
      kern::omp::score_rows(rows, rows_n, dim, mean, stdev, centroids, k, cl_o, d_o);
    });
    table.push_back({"score_rows", s_ms, o_ms, same});
  }

  std::printf("%-16s %12s %12s %9s %10s\n", "kernel", "serial ms", "omp ms",
              "speedup", "identical");
  bool all_same = true;
  for (const auto& row : table) {
    all_same = all_same && row.identical;
    std::printf("%-16s %12.3f %12.3f %8.2fx %10s\n", row.name.c_str(),
                row.serial_ms, row.omp_ms,
                row.omp_ms > 0.0 ? row.serial_ms / row.omp_ms : 0.0,
                row.identical ? "yes" : "NO");
  }
  if (!all_same) {
    std::fprintf(stderr, "kernel outputs diverge between drivers\n");
    return 1;
  }
  return 0;
}
