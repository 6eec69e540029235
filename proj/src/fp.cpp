#include "diol/fp.hpp"

#include <charconv>

namespace diol {

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::optional<double> parse_double(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  double v = 0.0;
  auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc{} || r.ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

}  // namespace diol
