// errors.hpp: exception types shared by every cqed module

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cqed {

// Base of every library error. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Product space larger than the configured maximum.
class CapacityError : public Error {
public:
    using Error::Error;
};

// A documented precondition was violated (non-hermitian generator, bad params).
class ContractViolation : public Error {
public:
    using Error::Error;
};

// NaN/Inf, solver non-convergence, residual checks that failed.
class NumericError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

// Physical model cannot be represented (e.g. indefinite kinetic block).
class ModelError : public Error {
public:
    using Error::Error;
};

// Symplectic integration lost energy control.
class StepSizeError : public NumericError {
public:
    using NumericError::NumericError;
};

// Configuration problems; carries every violation found, each prefixed by its key path.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace cqed
