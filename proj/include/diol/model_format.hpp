#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "diol/errors.hpp"
#include "diol/kmeans.hpp"

// Portable plain-text model exchange format, version 1. The grammar is
// fixed and line-oriented; every line ends with a single LF and fields are
// separated by single spaces. Reals are written as shortest round-trip
// decimals, so a parsed model is bit-identical to the serialized one.
//
//   DIOL_MODEL v1
//   TYPE: KMEANS
//   K: <int>
//   D: <int>
//   FEATURES: <name>,<name>,...      (D comma-separated identifiers)
//   CENTROIDS:
//   <D reals>                        (K rows)
//   MEAN:
//   <D reals>
//   STD:
//   <D reals>
//   THRESHOLD: <real>
//   SCALE: <real>
//   END
namespace diol {

enum class ParseErrorKind {
  MissingSection,      // a required section header or row never appears
  CountMismatch,       // row/field counts disagree with K or D
  NonFiniteValue,      // nan or inf where a finite real is required
  RangeViolation,      // value parses but violates its allowed range
  BadSyntax,           // token-level garbage, stray bytes, bad line shape
  UnsupportedVersion,  // unknown format version or model type
};

std::string_view to_string(ParseErrorKind kind);

// A rejected document or model. `line` is the 1-based input line the
// parser stopped on; validation of an in-memory model reports line 0.
struct ParseError {
  ParseErrorKind kind = ParseErrorKind::BadSyntax;
  int line = 0;
  std::string detail;

  std::string message() const;

  bool operator==(const ParseError&) const = default;
};

// Thrown by callers that cannot continue past a rejected model file.
class ModelFormatError : public Error {
 public:
  explicit ModelFormatError(ParseError err)
      : Error(err.message()), err_(std::move(err)) {}

  const ParseError& error() const { return err_; }

 private:
  ParseError err_;
};

struct ModelDocument {
  int format_version = 1;
  KMeansModel model;

  bool operator==(const ModelDocument&) const = default;
};

// Serializes a valid model. Throws ModelFormatError (line 0) when the
// model fails validate().
std::string serialize(const KMeansModel& model);

// Single-pass strict parse. Never throws on malformed input; returns the
// first ParseError instead. A returned document always passes validate().
std::variant<ModelDocument, ParseError> parse(std::string_view text);

// Structural and range checks on an in-memory model (line 0 on failure):
// 1 <= k <= 64, 1 <= dim <= 32, centroid/stat dimensions consistent,
// every std > 0, threshold > 0, scale > 0, dim identifier feature names,
// all reals finite.
std::optional<ParseError> validate(const KMeansModel& model);

}  // namespace diol
