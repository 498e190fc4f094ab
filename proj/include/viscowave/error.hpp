#pragma once

// Exception hierarchy shared by all viscowave modules. Every error carries a
// short machine-readable kind() so that the CLI can report it as JSON.

#include <stdexcept>
#include <string>

namespace viscowave {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// A constructor precondition was violated (bad model parameters).
class InvalidParameter : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_parameter"; }
};

/// Malformed or schema-invalid configuration input.
class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_config"; }
};

/// An operation was called outside its domain (t <= 0, p on the cut, ...).
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain_error"; }
};

class UnsupportedOperation : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "unsupported_operation"; }
};

/// Quadrature or series failed to reach the requested tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double partial_value, double achieved_error)
        : Error(what), partial_value_(partial_value), achieved_error_(achieved_error) {}
    const char* kind() const noexcept override { return "convergence_error"; }
    double partial_value() const noexcept { return partial_value_; }
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double partial_value_;
    double achieved_error_;
};

/// A computed object failed one of its structural invariants.
class InvariantViolation : public Error {
public:
    InvariantViolation(std::string invariant, const std::string& detail)
        : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
    const char* kind() const noexcept override { return "invariant_violation"; }
    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

}  // namespace viscowave
