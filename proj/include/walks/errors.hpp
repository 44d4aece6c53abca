#pragma once

#include <stdexcept>
#include <string>

namespace walks {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Input text could not be read as a configuration (malformed JSON, a
/// missing required key, or a value of the wrong shape).
class parse_error : public error {
 public:
  using error::error;
};

/// An argument is outside the domain of an operation (bad index, length
/// mismatch, operation not defined for the given group kind, ...).
class domain_error : public error {
 public:
  using error::error;
};

/// A value fails the invariants of the type being constructed
/// (probabilities that do not sum to one, a matrix that is not doubly
/// stochastic, a density matrix with a negative eigenvalue, ...).
class validation_error : public error {
 public:
  using error::error;
};

/// A request exceeds a documented size limit.
class capacity_error : public error {
 public:
  using error::error;
};

/// A computation whose answer does not exist for the given input
/// (e.g. asking for a mixing-time estimate of a non-ergodic walk).
class unsupported_error : public error {
 public:
  using error::error;
};

}  // namespace walks
