#pragma once

#include <string>
#include <string_view>

namespace palmlab {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Strict parse of a whole (trimmed) string; throws Error{ParseError}.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::string_view trim(std::string_view text) noexcept;

}  // namespace palmlab
