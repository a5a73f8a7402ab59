#pragma once

// Text helpers shared by the record formats and the CLI tables.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace nbqi::io {

/// Shortest decimal representation that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

/// Strict parse of the whole string; throws std::invalid_argument otherwise.
[[nodiscard]] double parse_double(std::string_view text);
[[nodiscard]] long long parse_int(std::string_view text);
[[nodiscard]] std::uint64_t parse_uint64(std::string_view text);

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// skipped. Duplicate keys and lines without '=' throw std::invalid_argument.
[[nodiscard]] std::map<std::string, std::string> parse_key_values(std::string_view text);

/// One `key=value` line per entry, keys in sorted order.
[[nodiscard]] std::string format_key_values(const std::map<std::string, std::string>& record);

} // namespace nbqi::io
