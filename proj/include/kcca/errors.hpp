#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kcca {

/// Base class for every error raised by the library. `category()` is a short
/// stable tag ("input", "numerical", ...) used by the CLI to prefix messages.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* category() const noexcept = 0;
};

/// Malformed arguments: dimension mismatches, out-of-range parameters,
/// unparsable kernel specs.
class InputError : public Error {
public:
    using Error::Error;
    const char* category() const noexcept override { return "input"; }
};

/// A data or model file was read but its contents are malformed.
class FormatError : public InputError {
public:
    using InputError::InputError;
    const char* category() const noexcept override { return "format"; }
};

/// Filesystem failures: unreadable or unwritable paths.
class IoError : public Error {
public:
    using Error::Error;
    const char* category() const noexcept override { return "io"; }
};

/// Base for failures of the numerical routines themselves.
class NumericalError : public Error {
public:
    using Error::Error;
    const char* category() const noexcept override { return "numerical"; }
};

class NotPositiveDefiniteError : public NumericalError {
public:
    NotPositiveDefiniteError(std::size_t pivot, double value, const std::string& advice = {})
        : NumericalError("matrix is not positive definite: pivot " + std::to_string(pivot) +
                         " is " + std::to_string(value) + (advice.empty() ? "" : "; " + advice)),
          pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// Regularized Gram blocks could not be factored even after jitter.
class SingularRegularizationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A projected feature column has zero variance, so its Pearson
/// correlation is undefined.
class DegenerateFeatureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace kcca
