#pragma once

#include <string>
#include <string_view>

namespace locsim {

/// Shortest decimal form that parses back to the same double; "nan" for NaN.
std::string format_double(double value);

/// Accepts everything format_double emits. Throws std::invalid_argument.
double parse_double(std::string_view token);

} // namespace locsim
