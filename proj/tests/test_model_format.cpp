#include "doctest.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "diol/model_format.hpp"
#include "diol/prng.hpp"
#include "support/corrupt_corpus.hpp"

using diol::KMeansModel;
using diol::ModelDocument;
using diol::ParseError;
using diol::ParseErrorKind;

namespace {

KMeansModel sample_model() {
  KMeansModel m;
  m.k = 3;
  m.dim = 5;
  m.centroids = {{0.5, -1.25, 0.0, 2.0, 8.99679},
                 {1.0, 1.0, 1.0, 1.0, 1.0},
                 {-0.125, 3.5, 0.7071067811865476, 0.1, -2.75}};
  m.norm.mean = {1.1, 0.9, 0.02, 0.0, 14.2};
  m.norm.std = {0.4, 0.3, 0.01, 0.05, 9.0};
  m.threshold = 1.732;
  m.scale = 1.0;
  m.feature_names = {"rms", "rolling_mean", "rolling_std", "rms_slope",
                     "on_duration_s"};
  return m;
}

// Random finite non-zero-ish doubles with awkward bit patterns, so the
// round-trip test exercises the full shortest-decimal formatter.
double random_finite(diol::SplitMix64& rng) {
  for (;;) {
    const auto bits = rng.next();
    const double v = std::bit_cast<double>(bits);
    if (std::isfinite(v) && std::fabs(v) < 1e300) return v;
  }
}

KMeansModel random_model(diol::SplitMix64& rng) {
  KMeansModel m;
  m.k = 1 + rng.next() % 8;
  m.dim = 1 + rng.next() % 6;
  m.centroids.assign(m.k, std::vector<double>(m.dim));
  for (auto& row : m.centroids)
    for (auto& x : row) x = random_finite(rng);
  m.norm.mean.resize(m.dim);
  m.norm.std.resize(m.dim);
  for (auto& x : m.norm.mean) x = random_finite(rng);
  for (auto& x : m.norm.std) x = std::fabs(random_finite(rng)) + 1e-300;
  m.threshold = std::fabs(random_finite(rng)) + 1e-300;
  m.scale = std::fabs(random_finite(rng)) + 1e-300;
  m.feature_names.resize(m.dim);
  for (std::size_t j = 0; j < m.dim; ++j)
    m.feature_names[j] = "f_" + std::to_string(j);
  return m;
}

bool same_bits(const KMeansModel& a, const KMeansModel& b) {
  const auto eq = [](double x, double y) {
    return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
  };
  if (a.k != b.k || a.dim != b.dim || a.feature_names != b.feature_names)
    return false;
  if (!eq(a.threshold, b.threshold) || !eq(a.scale, b.scale)) return false;
  for (std::size_t j = 0; j < a.dim; ++j) {
    if (!eq(a.norm.mean[j], b.norm.mean[j])) return false;
    if (!eq(a.norm.std[j], b.norm.std[j])) return false;
  }
  for (std::size_t c = 0; c < a.k; ++c)
    for (std::size_t j = 0; j < a.dim; ++j)
      if (!eq(a.centroids[c][j], b.centroids[c][j])) return false;
  return true;
}

}  // namespace

TEST_CASE("serialize emits the documented line grammar") {
  KMeansModel m;
  m.k = 2;
  m.dim = 2;
  m.centroids = {{0.5, -1.0}, {2.0, 0.25}};
  m.norm.mean = {1.0, 2.0};
  m.norm.std = {0.5, 4.0};
  m.threshold = 3.0;
  m.scale = 1.5;
  m.feature_names = {"alpha", "beta"};

  CHECK(diol::serialize(m) ==
        "DIOL_MODEL v1\n"
        "TYPE: KMEANS\n"
        "K: 2\n"
        "D: 2\n"
        "FEATURES: alpha,beta\n"
        "CENTROIDS:\n"
        "0.5 -1\n"
        "2 0.25\n"
        "MEAN:\n"
        "1 2\n"
        "STD:\n"
        "0.5 4\n"
        "THRESHOLD: 3\n"
        "SCALE: 1.5\n"
        "END\n");
}

TEST_CASE("parse(serialize(m)) reproduces every bit of the model") {
  diol::SplitMix64 rng(42424242);
  int trips = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto m = random_model(rng);
    const auto text = diol::serialize(m);
    const auto result = diol::parse(text);
    REQUIRE(std::holds_alternative<ModelDocument>(result));
    const auto& doc = std::get<ModelDocument>(result);
    CHECK(doc.format_version == 1);
    REQUIRE(same_bits(doc.model, m));
    // Byte-level idempotence: reserializing the parse is the same file.
    REQUIRE(diol::serialize(doc.model) == text);
    ++trips;
  }
  CHECK(trips == 1000);
}

TEST_CASE("every corpus corruption is rejected with the expected kind") {
  const auto valid = diol::serialize(sample_model());
  REQUIRE(std::holds_alternative<ModelDocument>(diol::parse(valid)));

  const auto corpus = testsupport::build_corrupt_corpus(valid);
  REQUIRE(corpus.size() > 30);
  for (const auto& c : corpus) {
    CAPTURE(c.name);
    const auto result = diol::parse(c.text);
    REQUIRE_MESSAGE(std::holds_alternative<ParseError>(result),
                    "case accepted: ", c.name);
    const auto& err = std::get<ParseError>(result);
    CHECK_MESSAGE(err.kind == c.expected, "case ", c.name, ": got ",
                  diol::to_string(err.kind), ", want ",
                  diol::to_string(c.expected));
    CHECK(err.line >= 1);
    CHECK(!err.message().empty());
  }
}

TEST_CASE("parse reports the line number of the offending input line") {
  auto text = diol::serialize(sample_model());
  // Corrupt the first token of the first centroid row (line 7). Inserting
  // a letter keeps the field count intact, so this is pure token garbage.
  const auto pos = text.find("CENTROIDS:\n") + std::string("CENTROIDS:\n").size();
  text.insert(pos, "x");
  const auto result = diol::parse(text);
  REQUIRE(std::holds_alternative<ParseError>(result));
  const auto& err = std::get<ParseError>(result);
  CHECK(err.line == 7);
  CHECK(err.kind == ParseErrorKind::BadSyntax);
}

TEST_CASE("validate flags in-memory inconsistencies at line 0") {
  const auto base = sample_model();
  CHECK(!diol::validate(base).has_value());

  auto m = base;
  m.norm.std[2] = 0.0;
  auto err = diol::validate(m);
  REQUIRE(err.has_value());
  CHECK(err->kind == ParseErrorKind::RangeViolation);
  CHECK(err->line == 0);

  m = base;
  m.centroids.pop_back();
  err = diol::validate(m);
  REQUIRE(err.has_value());
  CHECK(err->kind == ParseErrorKind::CountMismatch);

  m = base;
  m.centroids[1][3] = std::numeric_limits<double>::infinity();
  err = diol::validate(m);
  REQUIRE(err.has_value());
  CHECK(err->kind == ParseErrorKind::NonFiniteValue);

  m = base;
  m.feature_names[0] = "not an identifier";
  err = diol::validate(m);
  REQUIRE(err.has_value());
  CHECK(err->kind == ParseErrorKind::BadSyntax);

  m = base;
  m.threshold = -1.0;
  err = diol::validate(m);
  REQUIRE(err.has_value());
  CHECK(err->kind == ParseErrorKind::RangeViolation);
}

TEST_CASE("serialize refuses a model that fails validation") {
  auto m = sample_model();
  m.norm.std[0] = -2.0;
  CHECK_THROWS_AS(diol::serialize(m), diol::ModelFormatError);
  try {
    diol::serialize(m);
  } catch (const diol::ModelFormatError& e) {
    CHECK(e.error().kind == ParseErrorKind::RangeViolation);
    CHECK(e.error().line == 0);
  }
}

TEST_CASE("error kinds print as stable snake_case names") {
  CHECK(diol::to_string(ParseErrorKind::MissingSection) == "missing_section");
  CHECK(diol::to_string(ParseErrorKind::CountMismatch) == "count_mismatch");
  CHECK(diol::to_string(ParseErrorKind::NonFiniteValue) == "non_finite_value");
  CHECK(diol::to_string(ParseErrorKind::RangeViolation) == "range_violation");
  CHECK(diol::to_string(ParseErrorKind::BadSyntax) == "bad_syntax");
  CHECK(diol::to_string(ParseErrorKind::UnsupportedVersion) ==
        "unsupported_version");
}
