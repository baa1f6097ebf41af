#pragma once

#include <stdexcept>
#include <string>

namespace stc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector field or storage function produced a non-finite value.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration: bad parameters, malformed files, violated
/// preconditions on the reference parameter set.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A timer-dependent coefficient went negative, i.e. a hybrid Lyapunov
/// function was evaluated past its certified horizon.
class InvalidPhiError : public Error {
 public:
  using Error::Error;
};

/// Numerical integration produced a non-finite state.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// The trajectory left the region in which the stability certificate holds.
class OutOfRegionError : public Error {
 public:
  using Error::Error;
};

}  // namespace stc
