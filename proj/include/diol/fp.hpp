#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace diol {

// Shortest decimal string that parses back to the identical double.
// This is what makes the exported model file reconstruct bit-exact values
// on the loading device.
std::string format_double(double v);

// Strict parsers: the whole token must be consumed, no leading/trailing
// whitespace. parse_double accepts nan/inf spellings (callers that require
// finite values check afterwards).
std::optional<double> parse_double(std::string_view tok);
std::optional<std::int64_t> parse_int(std::string_view tok);

}  // namespace diol
