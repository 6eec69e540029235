#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "diol/model_format.hpp"

// Generates a corpus of corrupted model documents from one valid
// serialized model: truncation at every line boundary, per-field
// nan/inf/garbage substitution, row/field count mismatches, section
// reordering, version and type bumps, and byte-level damage. Each case
// carries the error kind the parser documents for it.
namespace testsupport {

struct CorruptCase {
  std::string name;
  std::string text;
  diol::ParseErrorKind expected;
};

namespace corpus_detail {

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

inline std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out.push_back('\n');
  }
  return out;
}

inline std::size_t find_line(const std::vector<std::string>& lines,
                             const std::string& prefix) {
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i].rfind(prefix, 0) == 0) return i;
  throw std::logic_error("corpus builder: no line starts with '" + prefix + "'");
}

inline std::string replace_first(std::string text, const std::string& from,
                                 const std::string& to) {
  const std::size_t at = text.find(from);
  if (at == std::string::npos)
    throw std::logic_error("corpus builder: '" + from + "' not found");
  return text.replace(at, from.size(), to);
}

}  // namespace corpus_detail

inline std::vector<CorruptCase> build_corrupt_corpus(const std::string& valid) {
  namespace cd = corpus_detail;
  using Kind = diol::ParseErrorKind;

  const std::vector<std::string> lines = cd::split_lines(valid);
  const std::size_t centroids_at = cd::find_line(lines, "CENTROIDS:");
  const std::size_t mean_at = cd::find_line(lines, "MEAN:");
  const std::size_t std_at = cd::find_line(lines, "STD:");
  const std::size_t threshold_at = cd::find_line(lines, "THRESHOLD: ");
  const std::size_t scale_at = cd::find_line(lines, "SCALE: ");
  const std::size_t k_rows = mean_at - centroids_at - 1;
  const std::string row = lines[centroids_at + 1];
  const std::size_t row_space = row.find(' ');

  std::vector<CorruptCase> corpus;
  auto add = [&corpus](std::string name, std::string text, Kind expected) {
    corpus.push_back({std::move(name), std::move(text), expected});
  };

  // Truncation at every line boundary. Inside the centroid block the
  // parser knows how many rows it still expects (CountMismatch); anywhere
  // else the next section is simply missing.
  for (std::size_t j = 0; j < lines.size(); ++j) {
    const bool in_rows = j > centroids_at && j <= centroids_at + k_rows;
    add("truncate_after_line_" + std::to_string(j),
        cd::join_lines({lines.begin(), lines.begin() + static_cast<long>(j)}),
        in_rows ? Kind::CountMismatch : Kind::MissingSection);
  }

  // Version / type bumps.
  add("version_bump", cd::replace_first(valid, "DIOL_MODEL v1", "DIOL_MODEL v2"),
      Kind::UnsupportedVersion);
  add("alien_header", cd::replace_first(valid, "DIOL_MODEL v1", "SOME_MODEL v1"),
      Kind::MissingSection);
  add("alien_type", cd::replace_first(valid, "TYPE: KMEANS", "TYPE: DBSCAN"),
      Kind::UnsupportedVersion);

  // Shape fields.
  add("k_garbage", cd::replace_first(valid, lines[2], "K: three"), Kind::BadSyntax);
  add("k_zero", cd::replace_first(valid, lines[2], "K: 0"), Kind::RangeViolation);
  add("d_overflow", cd::replace_first(valid, lines[3], "D: 33"),
      Kind::RangeViolation);
  add("k_no_space", cd::replace_first(valid, lines[2], "K:3"), Kind::BadSyntax);

  // Feature list.
  {
    const std::string& feats = lines[4];
    const std::size_t last_comma = feats.rfind(',');
    add("features_too_few", cd::replace_first(valid, feats, feats.substr(0, last_comma)),
        Kind::CountMismatch);
    add("features_bad_identifier",
        cd::replace_first(valid, feats.substr(feats.find(' ') + 1), "1a,b,c,d,e"),
        Kind::BadSyntax);
  }

  // Centroid block.
  add("centroid_nan",
      cd::replace_first(valid, row, "nan" + row.substr(row_space)),
      Kind::NonFiniteValue);
  add("centroid_inf",
      cd::replace_first(valid, row, "inf" + row.substr(row_space)),
      Kind::NonFiniteValue);
  add("centroid_garbage",
      cd::replace_first(valid, row, "1.2.3" + row.substr(row_space)),
      Kind::BadSyntax);
  add("centroid_field_missing",
      cd::replace_first(valid, row, row.substr(row_space + 1)),
      Kind::CountMismatch);
  add("centroid_field_extra", cd::replace_first(valid, row, row + " 0.5"),
      Kind::CountMismatch);
  add("centroid_double_space",
      cd::replace_first(valid, row,
                        row.substr(0, row_space) + "  " + row.substr(row_space + 1)),
      Kind::BadSyntax);
  add("centroid_tab",
      cd::replace_first(valid, row,
                        row.substr(0, row_space) + "\t" + row.substr(row_space + 1)),
      Kind::BadSyntax);
  {
    std::vector<std::string> fewer = lines;
    fewer.erase(fewer.begin() + static_cast<long>(centroids_at) + 1);
    add("centroid_row_missing", cd::join_lines(fewer), Kind::CountMismatch);
    std::vector<std::string> extra = lines;
    extra.insert(extra.begin() + static_cast<long>(centroids_at) + 1, row);
    add("centroid_row_extra", cd::join_lines(extra), Kind::CountMismatch);
  }

  // Normalization stats.
  {
    const std::string& srow = lines[std_at + 1];
    const std::size_t sp = srow.find(' ');
    add("std_zero", cd::replace_first(valid, srow, "0" + srow.substr(sp)),
        Kind::RangeViolation);
    add("std_negative", cd::replace_first(valid, srow, "-1" + srow.substr(sp)),
        Kind::RangeViolation);
    add("mean_nan",
        cd::replace_first(valid, lines[mean_at + 1],
                          "nan" + lines[mean_at + 1].substr(
                                      lines[mean_at + 1].find(' '))),
        Kind::NonFiniteValue);
  }

  // Decision boundary.
  add("threshold_nan",
      cd::replace_first(valid, lines[threshold_at], "THRESHOLD: nan"),
      Kind::NonFiniteValue);
  add("threshold_negative",
      cd::replace_first(valid, lines[threshold_at], "THRESHOLD: -3.5"),
      Kind::RangeViolation);
  add("threshold_garbage",
      cd::replace_first(valid, lines[threshold_at], "THRESHOLD: big"),
      Kind::BadSyntax);
  add("scale_zero", cd::replace_first(valid, lines[scale_at], "SCALE: 0"),
      Kind::RangeViolation);

  // Section reordering.
  {
    std::vector<std::string> swapped = lines;
    std::swap(swapped[mean_at], swapped[std_at]);
    add("mean_std_swapped", cd::join_lines(swapped), Kind::MissingSection);

    std::vector<std::string> moved = lines;
    const std::string thr = moved[threshold_at];
    moved.erase(moved.begin() + static_cast<long>(threshold_at));
    moved.insert(moved.begin() + static_cast<long>(centroids_at), thr);
    add("threshold_before_centroids", cd::join_lines(moved), Kind::MissingSection);
  }

  // Byte-level damage.
  add("trailing_content", valid + "EXTRA\n", Kind::BadSyntax);
  add("missing_final_newline", valid.substr(0, valid.size() - 1), Kind::BadSyntax);
  {
    std::string crlf;
    for (char c : valid) {
      if (c == '\n') crlf += "\r\n";
      else crlf.push_back(c);
    }
    add("crlf_endings", crlf, Kind::BadSyntax);
  }

  return corpus;
}

}  // namespace testsupport
