#pragma once

#include <string>
#include <string_view>

namespace tdec {

// Shortest representation that parses back to the same double.
std::string format_exact(double value);
// 12 significant digits; used for every derived artifact so reruns diff cleanly.
std::string format_g12(double value);
// The double nearest to format_g12(value).
double round_g12(double value);

// Parses a full token as a double; returns false on trailing garbage or empty input.
bool parse_double(std::string_view token, double& out);

std::string_view trim(std::string_view s);

}  // namespace tdec
