#pragma once

#include <stdexcept>
#include <string>

namespace rgw {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's mathematical domain (ln of a negative,
// division by zero, pole of Gamma, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public DomainError {
 public:
  DivisionByZero() : DomainError("division by zero") {}
  explicit DivisionByZero(const std::string& what) : DomainError(what) {}
};

// Input that fails a model invariant (bad measure, malformed spec file).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An iterative method did not reach its target; the message carries the
// diagnostics (residual, cell, iteration count).
class SolverError : public Error {
 public:
  using Error::Error;
};

// Exact arithmetic outgrew its configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rgw
