#pragma once

#include <stdexcept>
#include <string>

namespace driftbench {

/// Base of every error the toolkit raises. The subclass tells the caller
/// which failure class occurred (bad configuration, bad data, numerical).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or missing configuration, including model parameters that
/// cannot describe a valid process (e.g. |rho| > 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParameterError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Malformed or unreadable input/output files.
class DataError : public Error {
public:
    using Error::Error;
};

/// Factorization, inversion or positivity failures.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DimensionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace driftbench
