#pragma once

#include <string>
#include <string_view>

namespace actuation {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-string parse; throws ConfigError on trailing garbage.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::string_view trim(std::string_view text) noexcept;

}  // namespace actuation
