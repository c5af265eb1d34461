#pragma once

#include <stdexcept>
#include <string>

namespace hatchcycle {

/// A numerical procedure could not produce a trustworthy result
/// (step-size underflow, missing bracket, nonexistent cycle, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent user configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hatchcycle
