#pragma once

#include <stdexcept>
#include <string>

namespace otquant {

/// Base class for failures of otherwise well-formed commands: bad input data,
/// violated preconditions, failed validation. The CLI maps these to exit 1.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownAlgorithmError : public DomainError {
public:
    explicit UnknownAlgorithmError(const std::string& name)
        : DomainError("unknown algorithm: " + name), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// Config document problems: syntax errors (with location) and dangling
/// references (with the offending identifier).
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Raised when a metric has no defined value (e.g. rate over an empty stream).
class UndefinedMetricError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace otquant
