#include "diol/model_format.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "diol/fp.hpp"

namespace diol {
namespace {

using Kind = ParseErrorKind;

bool is_identifier(std::string_view s) {
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto alnum = [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); };
  if (s.empty() || !alpha(s[0])) return false;
  for (char c : s.substr(1))
    if (!alnum(c)) return false;
  return true;
}

// Splits on single spaces. Returns false on an empty field, which is what
// a double/leading/trailing space or an empty line produces.
bool split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t pos = 0;
  while (true) {
    const std::size_t sp = line.find(' ', pos);
    const std::string_view tok = line.substr(
        pos, sp == std::string_view::npos ? line.size() - pos : sp - pos);
    if (tok.empty()) return false;
    out.push_back(tok);
    if (sp == std::string_view::npos) return true;
    pos = sp + 1;
  }
}

bool looks_like_row(std::string_view line, std::size_t dim) {
  std::vector<std::string_view> toks;
  if (!split_fields(line, toks) || toks.size() != dim) return false;
  for (auto tok : toks)
    if (!parse_double(tok)) return false;
  return true;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case Kind::MissingSection: return "missing_section";
    case Kind::CountMismatch: return "count_mismatch";
    case Kind::NonFiniteValue: return "non_finite_value";
    case Kind::RangeViolation: return "range_violation";
    case Kind::BadSyntax: return "bad_syntax";
    case Kind::UnsupportedVersion: return "unsupported_version";
  }
  return "unknown";
}

std::string ParseError::message() const {
  std::string out = "model format error (";
  out += to_string(kind);
  out += ")";
  if (line > 0) out += " at line " + std::to_string(line);
  out += ": " + detail;
  return out;
}

std::optional<ParseError> validate(const KMeansModel& m) {
  auto fail = [](Kind kind, std::string detail) {
    return ParseError{kind, 0, std::move(detail)};
  };
  if (m.k < 1 || m.k > 64)
    return fail(Kind::RangeViolation,
                "k=" + std::to_string(m.k) + " outside [1, 64]");
  if (m.dim < 1 || m.dim > 32)
    return fail(Kind::RangeViolation,
                "dim=" + std::to_string(m.dim) + " outside [1, 32]");
  if (m.centroids.size() != m.k)
    return fail(Kind::CountMismatch,
                std::to_string(m.centroids.size()) + " centroid rows for k=" +
                    std::to_string(m.k));
  for (std::size_t c = 0; c < m.centroids.size(); ++c) {
    if (m.centroids[c].size() != m.dim)
      return fail(Kind::CountMismatch, "centroid row " + std::to_string(c) +
                                           " has " +
                                           std::to_string(m.centroids[c].size()) +
                                           " values for dim=" +
                                           std::to_string(m.dim));
    for (double v : m.centroids[c])
      if (!std::isfinite(v))
        return fail(Kind::NonFiniteValue,
                    "non-finite centroid value in row " + std::to_string(c));
  }
  if (m.norm.mean.size() != m.dim)
    return fail(Kind::CountMismatch, "mean row has " +
                                         std::to_string(m.norm.mean.size()) +
                                         " values for dim=" +
                                         std::to_string(m.dim));
  for (double v : m.norm.mean)
    if (!std::isfinite(v))
      return fail(Kind::NonFiniteValue, "non-finite mean value");
  if (m.norm.std.size() != m.dim)
    return fail(Kind::CountMismatch, "std row has " +
                                         std::to_string(m.norm.std.size()) +
                                         " values for dim=" +
                                         std::to_string(m.dim));
  for (double v : m.norm.std) {
    if (!std::isfinite(v)) return fail(Kind::NonFiniteValue, "non-finite std value");
    if (!(v > 0.0))
      return fail(Kind::RangeViolation, "std value " + format_double(v) +
                                            " is not positive");
  }
  if (!std::isfinite(m.threshold))
    return fail(Kind::NonFiniteValue, "non-finite threshold");
  if (!(m.threshold > 0.0))
    return fail(Kind::RangeViolation,
                "threshold " + format_double(m.threshold) + " is not positive");
  if (!std::isfinite(m.scale))
    return fail(Kind::NonFiniteValue, "non-finite scale");
  if (!(m.scale > 0.0))
    return fail(Kind::RangeViolation,
                "scale " + format_double(m.scale) + " is not positive");
  if (m.feature_names.size() != m.dim)
    return fail(Kind::CountMismatch,
                std::to_string(m.feature_names.size()) +
                    " feature names for dim=" + std::to_string(m.dim));
  for (const auto& name : m.feature_names)
    if (!is_identifier(name))
      return fail(Kind::BadSyntax, "feature name '" + name + "' is not an identifier");
  return std::nullopt;
}

std::string serialize(const KMeansModel& m) {
  if (auto err = validate(m)) throw ModelFormatError(*err);

  std::string out = "DIOL_MODEL v1\nTYPE: KMEANS\n";
  out += "K: " + std::to_string(m.k) + "\n";
  out += "D: " + std::to_string(m.dim) + "\n";
  out += "FEATURES: " + join(m.feature_names, ',') + "\n";
  out += "CENTROIDS:\n";
  auto append_row = [&out](const std::vector<double>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out.push_back(' ');
      out += format_double(row[j]);
    }
    out.push_back('\n');
  };
  for (const auto& row : m.centroids) append_row(row);
  out += "MEAN:\n";
  append_row(m.norm.mean);
  out += "STD:\n";
  append_row(m.norm.std);
  out += "THRESHOLD: " + format_double(m.threshold) + "\n";
  out += "SCALE: " + format_double(m.scale) + "\n";
  out += "END\n";
  return out;
}

std::variant<ModelDocument, ParseError> parse(std::string_view text) {
  if (text.empty())
    return ParseError{Kind::MissingSection, 1, "empty input, expected DIOL_MODEL header"};

  // Byte-level strictness first: CR and TAB never appear in a valid file,
  // and the final line must be LF-terminated.
  {
    int line = 1;
    for (char c : text) {
      if (c == '\r') return ParseError{Kind::BadSyntax, line, "carriage return"};
      if (c == '\t') return ParseError{Kind::BadSyntax, line, "tab character"};
      if (c == '\n') ++line;
    }
    if (text.back() != '\n')
      return ParseError{Kind::BadSyntax, line, "missing final line feed"};
  }

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < text.size();) {
    const std::size_t nl = text.find('\n', pos);
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }

  std::size_t i = 0;
  auto line_no = [&] { return static_cast<int>(i) + 1; };
  auto eof = [&] { return i >= lines.size(); };
  std::optional<ParseError> err;

  auto expect_exact = [&](std::string_view want) -> bool {
    if (eof()) {
      err = ParseError{Kind::MissingSection, line_no(),
                       "expected '" + std::string(want) + "'"};
      return false;
    }
    if (lines[i] != want) {
      err = ParseError{Kind::MissingSection, line_no(),
                       "expected '" + std::string(want) + "'"};
      return false;
    }
    ++i;
    return true;
  };

  // "<KEY>: <value>" line; returns the raw value token. A line that has
  // the key but not the exact "<KEY>: " shape is BadSyntax; a line that
  // does not even start with the key means the section is missing.
  auto keyed_value = [&](std::string_view key,
                         std::string_view& tok) -> bool {
    const std::string want = std::string(key) + ": ";
    if (eof()) {
      err = ParseError{Kind::MissingSection, line_no(),
                       "expected '" + want + "<value>'"};
      return false;
    }
    if (!lines[i].starts_with(want)) {
      if (lines[i].starts_with(std::string(key) + ":"))
        err = ParseError{Kind::BadSyntax, line_no(),
                         "malformed " + std::string(key) + " line"};
      else
        err = ParseError{Kind::MissingSection, line_no(),
                         "expected '" + want + "<value>'"};
      return false;
    }
    tok = lines[i].substr(want.size());
    ++i;
    return true;
  };

  auto int_field = [&](std::string_view key, std::int64_t lo, std::int64_t hi,
                       std::size_t& out) -> bool {
    std::string_view tok;
    const int at = line_no();
    if (!keyed_value(key, tok)) return false;
    const auto v = parse_int(tok);
    if (!v) {
      err = ParseError{Kind::BadSyntax, at,
                       std::string(key) + " value '" + std::string(tok) +
                           "' is not an integer"};
      return false;
    }
    if (*v < lo || *v > hi) {
      err = ParseError{Kind::RangeViolation, at,
                       std::string(key) + "=" + std::to_string(*v) +
                           " outside [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]"};
      return false;
    }
    out = static_cast<std::size_t>(*v);
    return true;
  };

  auto real_field = [&](std::string_view key, double& out) -> bool {
    std::string_view tok;
    const int at = line_no();
    if (!keyed_value(key, tok)) return false;
    const auto v = parse_double(tok);
    if (!v) {
      err = ParseError{Kind::BadSyntax, at,
                       std::string(key) + " value '" + std::string(tok) +
                           "' is not a real"};
      return false;
    }
    if (!std::isfinite(*v)) {
      err = ParseError{Kind::NonFiniteValue, at,
                       std::string(key) + " is not finite"};
      return false;
    }
    if (!(*v > 0.0)) {
      err = ParseError{Kind::RangeViolation, at,
                       std::string(key) + " must be positive"};
      return false;
    }
    out = *v;
    return true;
  };

  // 1. Header.
  if (lines[i] != "DIOL_MODEL v1") {
    if (lines[i].starts_with("DIOL_MODEL "))
      return ParseError{Kind::UnsupportedVersion, line_no(),
                        "unsupported format version '" +
                            std::string(lines[i].substr(11)) + "'"};
    return ParseError{Kind::MissingSection, line_no(),
                      "expected 'DIOL_MODEL v1' header"};
  }
  ++i;

  // 2. Model type.
  if (eof())
    return ParseError{Kind::MissingSection, line_no(), "expected 'TYPE: KMEANS'"};
  if (lines[i] != "TYPE: KMEANS") {
    if (lines[i].starts_with("TYPE: "))
      return ParseError{Kind::UnsupportedVersion, line_no(),
                        "unsupported model type '" +
                            std::string(lines[i].substr(6)) + "'"};
    return ParseError{Kind::MissingSection, line_no(), "expected 'TYPE: KMEANS'"};
  }
  ++i;

  // 3-4. Shape.
  std::size_t k = 0;
  std::size_t dim = 0;
  if (!int_field("K", 1, 64, k)) return *err;
  if (!int_field("D", 1, 32, dim)) return *err;

  // 5. Feature names.
  std::vector<std::string> names;
  {
    std::string_view rest;
    const int at = line_no();
    if (!keyed_value("FEATURES", rest)) return *err;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = rest.find(',', pos);
      const std::string_view tok = rest.substr(
          pos, comma == std::string_view::npos ? rest.size() - pos : comma - pos);
      if (!is_identifier(tok))
        return ParseError{Kind::BadSyntax, at,
                          "feature name '" + std::string(tok) +
                              "' is not an identifier"};
      names.emplace_back(tok);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (names.size() != dim)
      return ParseError{Kind::CountMismatch, at,
                        "FEATURES lists " + std::to_string(names.size()) +
                            " names for D=" + std::to_string(dim)};
  }

  // Shared row reader: exactly `dim` finite reals separated by single spaces.
  std::vector<std::string_view> toks;
  auto read_row = [&](std::vector<double>& row, Kind eof_kind,
                      const std::string& what) -> bool {
    if (eof()) {
      err = ParseError{eof_kind, line_no(), "file ends where " + what + " was expected"};
      return false;
    }
    if (!split_fields(lines[i], toks)) {
      err = ParseError{Kind::BadSyntax, line_no(),
                       "empty field in " + what + " (stray space?)"};
      return false;
    }
    if (toks.size() != dim) {
      err = ParseError{Kind::CountMismatch, line_no(),
                       what + " has " + std::to_string(toks.size()) +
                           " fields, expected D=" + std::to_string(dim)};
      return false;
    }
    row.clear();
    row.reserve(dim);
    for (auto tok : toks) {
      const auto v = parse_double(tok);
      if (!v) {
        err = ParseError{Kind::BadSyntax, line_no(),
                         "'" + std::string(tok) + "' in " + what +
                             " is not a real"};
        return false;
      }
      if (!std::isfinite(*v)) {
        err = ParseError{Kind::NonFiniteValue, line_no(),
                         "non-finite value in " + what};
        return false;
      }
      row.push_back(*v);
    }
    ++i;
    return true;
  };

  // 6-7. Centroid block.
  if (!expect_exact("CENTROIDS:")) return *err;
  std::vector<std::vector<double>> centroids(k);
  for (std::size_t c = 0; c < k; ++c) {
    if (!read_row(centroids[c], Kind::CountMismatch,
                  "centroid row " + std::to_string(c + 1) + " of " +
                      std::to_string(k)))
      return *err;
  }

  // 8-11. Normalization stats. An extra numeric row where MEAN: belongs
  // means the centroid block overran K.
  if (eof())
    return ParseError{Kind::MissingSection, line_no(), "expected 'MEAN:'"};
  if (lines[i] != "MEAN:") {
    if (looks_like_row(lines[i], dim))
      return ParseError{Kind::CountMismatch, line_no(),
                        "more centroid rows than K=" + std::to_string(k)};
    return ParseError{Kind::MissingSection, line_no(), "expected 'MEAN:'"};
  }
  ++i;
  std::vector<double> mean;
  if (!read_row(mean, Kind::MissingSection, "the MEAN row")) return *err;

  if (!expect_exact("STD:")) return *err;
  std::vector<double> stddev;
  {
    const int at = line_no();
    if (!read_row(stddev, Kind::MissingSection, "the STD row")) return *err;
    for (double v : stddev)
      if (!(v > 0.0))
        return ParseError{Kind::RangeViolation, at,
                          "std value " + format_double(v) + " is not positive"};
  }

  // 12-13. Decision boundary.
  double threshold = 0.0;
  double scale = 0.0;
  if (!real_field("THRESHOLD", threshold)) return *err;
  if (!real_field("SCALE", scale)) return *err;

  // 14. Terminator, then nothing.
  if (!expect_exact("END")) return *err;
  if (!eof())
    return ParseError{Kind::BadSyntax, line_no(), "content after END"};

  ModelDocument doc;
  doc.format_version = 1;
  doc.model.k = k;
  doc.model.dim = dim;
  doc.model.centroids = std::move(centroids);
  doc.model.norm.mean = std::move(mean);
  doc.model.norm.std = std::move(stddev);
  doc.model.threshold = threshold;
  doc.model.scale = scale;
  doc.model.feature_names = std::move(names);
  if (auto verr = validate(doc.model)) return *verr;  // defense in depth
  return doc;
}

}  // namespace diol
