#include "doctest.h"

#include <cmath>
#include <limits>

#include "diol/errors.hpp"
#include "diol/signal.hpp"
#include "support/oracles.hpp"

using diol::CleanseStats;
using diol::CurrentSample;
using diol::SignalConfig;

namespace {

std::vector<CurrentSample> ramp(std::size_t n) {
  std::vector<CurrentSample> s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = {static_cast<std::int64_t>(40 * i),
            0.01 * static_cast<double>(i % 97) - 0.3};
  return s;
}

}  // namespace

TEST_CASE("sample CSV round-trips") {
  const std::vector<CurrentSample> samples = {
      {0, 1.25}, {40, -0.0625}, {80, 0.1}, {120, -30.5}};
  const std::string text = diol::write_sample_csv(samples);
  CHECK(diol::parse_sample_csv(text) == samples);
  CHECK(text.substr(0, 23) == "timestamp_ms,current_a\n");
}

TEST_CASE("sample CSV parser reports the offending line") {
  CHECK_THROWS_WITH_AS(diol::parse_sample_csv("nope\n"),
                       "line 1: expected header 'timestamp_ms,current_a'",
                       diol::CsvError);
  CHECK_THROWS_WITH_AS(
      diol::parse_sample_csv("timestamp_ms,current_a\n0,1.0\nx,2.0\n"),
      "line 3: unparsable timestamp_ms", diol::CsvError);
  CHECK_THROWS_WITH_AS(
      diol::parse_sample_csv("timestamp_ms,current_a\n0,1.0,9\n"),
      "line 2: expected 2 comma-separated fields", diol::CsvError);
  CHECK_THROWS_WITH_AS(diol::parse_sample_csv("timestamp_ms,current_a\r\n0,1\n"),
                       "line 1: carriage return not allowed (LF endings required)",
                       diol::CsvError);
  CHECK_THROWS_AS(diol::parse_sample_csv(""), diol::CsvError);

  try {
    diol::parse_sample_csv("timestamp_ms,current_a\n0,1.0\nbroken\n");
    FAIL("expected CsvError");
  } catch (const diol::CsvError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("sample CSV accepts a missing trailing newline") {
  const auto samples = diol::parse_sample_csv("timestamp_ms,current_a\n5,0.5");
  REQUIRE(samples.size() == 1);
  CHECK(samples[0] == CurrentSample{5, 0.5});
}

TEST_CASE("cleanse drops, deduplicates and clamps") {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<CurrentSample> raw = {
      {0, 1.0},  {10, nan},   {20, 2.0},  {15, 3.0},  // out of order
      {20, 4.0},                                      // duplicate timestamp
      {30, inf}, {40, -55.0}, {50, 55.0}, {60, 0.25},
  };
  SignalConfig cfg;
  cfg.spike_clamp_a = 30.0;
  CleanseStats stats;
  const auto clean = diol::cleanse(raw, cfg, &stats);

  const std::vector<CurrentSample> want = {
      {0, 1.0}, {20, 2.0}, {40, -30.0}, {50, 30.0}, {60, 0.25}};
  CHECK(clean == want);
  CHECK(stats.dropped_nonfinite == 2);
  CHECK(stats.dropped_timestamp == 2);
  CHECK(stats.clamped == 2);
}

TEST_CASE("cleanse is total on pathological input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<CurrentSample> raw(500, {7, nan});
  const auto clean = diol::cleanse(raw, SignalConfig{});
  CHECK(clean.empty());
}

TEST_CASE("rms windows match the direct-summation oracle") {
  const auto samples = ramp(1000);
  SignalConfig cfg;
  cfg.window_len = 100;
  cfg.stride = 100;
  const auto records = diol::compute_rms_windows(samples, cfg);
  REQUIRE(records.size() == 10);

  std::vector<double> currents(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    currents[i] = samples[i].current_a;
  for (std::size_t w = 0; w < records.size(); ++w) {
    CHECK(records[w].rms_a ==
          testsupport::oracle_rms(currents, w * cfg.stride, cfg.window_len));
    CHECK(records[w].timestamp_ms ==
          samples[w * cfg.stride + cfg.window_len - 1].timestamp_ms);
  }
}

TEST_CASE("rms window count follows the full-window rule") {
  SignalConfig cfg;
  cfg.window_len = 100;
  cfg.stride = 100;
  CHECK(diol::compute_rms_windows(ramp(99), cfg).empty());
  CHECK(diol::compute_rms_windows(ramp(100), cfg).size() == 1);
  CHECK(diol::compute_rms_windows(ramp(199), cfg).size() == 1);
  CHECK(diol::compute_rms_windows(ramp(200), cfg).size() == 2);

  cfg.stride = 50;  // overlapping windows
  CHECK(diol::compute_rms_windows(ramp(200), cfg).size() == 3);
}

TEST_CASE("signal config rejects bad shapes") {
  SignalConfig cfg;
  cfg.stride = 200;
  CHECK_THROWS_AS(cfg.validate(), diol::Error);
  cfg = SignalConfig{};
  cfg.window_len = 0;
  CHECK_THROWS_AS(cfg.validate(), diol::Error);
  cfg = SignalConfig{};
  cfg.spike_clamp_a = 0.0;
  CHECK_THROWS_AS(cfg.validate(), diol::Error);
}
