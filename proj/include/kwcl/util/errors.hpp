#pragma once

#include <stdexcept>
#include <string>

namespace kwcl {

/// Invalid configuration or command usage. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input data (datasets, embedding tables, checkpoints).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric failure during training or inference (NaN/Inf loss, shape mismatch).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kwcl
