#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "locsim/core_model.hpp"

namespace locsim {

/// Evaluation scenarios: "high" (12 clients) and "low" (18 clients), both with
/// 20 slots per interval and quadratic cost. Throws UsageError on other names.
SystemConfig preset(std::string_view name);

/// Flat `key = value` format, '#' starts a comment:
///
///     tau = 20            # optional, default 20
///     window_T = 100      # optional
///     epsilon = 5         # optional
///     horizon = 10000     # optional
///     seed = 1            # optional
///     cost = quadratic    # or power:<k>, optional
///     p = 0.9, 0.8        # required
///     q = 0.5, 0.5        # required, same length as p
///
/// Errors are ConfigError with a "<source>:<line>: <key>: ..." prefix.
SystemConfig parse_config(std::string_view text, const std::string& source = "<config>");
SystemConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config; numbers are written in shortest round-trip form.
std::string format_config(const SystemConfig& config);

} // namespace locsim
