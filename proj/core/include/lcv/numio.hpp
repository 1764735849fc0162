#pragma once

#include <string>
#include <string_view>

namespace lcv {

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

/// Parse a double written by format_double; throws Error on garbage.
double parse_double(std::string_view s);

}  // namespace lcv
