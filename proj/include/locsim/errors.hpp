#pragma once

#include <stdexcept>
#include <string>

namespace locsim {

/// Invalid problem instance or configuration file content.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bad command line or preset name.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Targets outside [0,1]; deficit-driven policies cannot track them.
class InfeasibleTargetsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A metric was requested on a trace that cannot support it.
class MetricsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace locsim
