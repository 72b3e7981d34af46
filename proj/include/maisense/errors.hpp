#pragma once

#include <stdexcept>
#include <string>

namespace maisense {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scenario violates its invariants (N mod M, prep/strategy pairing, ...).
class InvalidScenario : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix cannot be pseudo-inverted without discarding signal.
class SingularGamma : public Error {
 public:
  using Error::Error;
};

/// Optimized moment matrix is not positive definite (no sensitivity).
class DegenerateScenario : public Error {
 public:
  using Error::Error;
};

/// Oracle Hilbert space would exceed the amplitude cap.
class DimensionCap : public Error {
 public:
  using Error::Error;
};

/// Search interval is empty or reversed.
class EmptyRange : public Error {
 public:
  using Error::Error;
};

/// Bad command-line / config-file input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace maisense
