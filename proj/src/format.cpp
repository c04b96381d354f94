#include "locsim/format.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace locsim {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: buffer too small");
    return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
    if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw std::invalid_argument("not a number: '" + std::string(token) + "'");
    }
    return value;
}

} // namespace locsim
