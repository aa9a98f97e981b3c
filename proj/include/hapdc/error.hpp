#pragma once

#include <stdexcept>
#include <string>

namespace hapdc {

/// Base of every error raised by the model. Subclasses map onto CLI exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration text or an unknown key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A parameter violates a documented invariant. The message names the owning type.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Polar day or night: the daylight-duration arccos argument left [-1, 1].
class PolarError : public Error {
public:
    using Error::Error;
};

/// Server utilization above the desired (high-load) threshold.
class OverloadError : public Error {
public:
    using Error::Error;
};

/// Queue utilization >= 1.
class InstabilityError : public Error {
public:
    using Error::Error;
};

/// Zero or negative link rate where a positive rate is required.
class LinkError : public Error {
public:
    using Error::Error;
};

/// Non-convergence, overflow, or other failure of a numerical routine.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Bad command-line usage (also raised for malformed sweep specs).
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace hapdc
