#pragma once

#include <stdexcept>
#include <string>

namespace polom {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration (config files, scenarios, arguments).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Wave vector or argument outside the range where the model is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Linearized dynamics has a drift eigenvalue with nonnegative real part.
class InstabilityError : public Error {
public:
    using Error::Error;
};

/// A covariance or density matrix that is not a valid quantum state.
class InvalidStateError : public Error {
public:
    using Error::Error;
};

/// Fock truncation too small for the populated states.
class TruncationError : public Error {
public:
    using Error::Error;
};

} // namespace polom
