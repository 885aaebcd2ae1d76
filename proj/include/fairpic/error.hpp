#pragma once

#include <stdexcept>
#include <string>

namespace fairpic {

/// Invalid or inconsistent configuration (dimension mismatch, bad parameter).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite value encountered during evaluation.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Caller violated an operation's precondition.
class UsageError : public std::logic_error {
public:
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace fairpic
