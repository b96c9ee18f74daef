#pragma once

#include <stdexcept>
#include <string>

namespace aelif {

// Invalid configuration, arguments, or file contents. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numeric failure at runtime (divergence, degenerate input). CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace aelif
