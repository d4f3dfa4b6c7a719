#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlclaw {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value or argument violates a documented precondition or type invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A velocity model was evaluated outside its validity interval.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A Lagrangian cell would reach nonpositive width within a step.
class CellCollapse : public Error {
 public:
  using Error::Error;
};

/// An operation specific to one kernel family was applied to another.
class KernelMismatch : public Error {
 public:
  using Error::Error;
};

/// The flux is not strictly concave between the two Riemann states.
class NonConcave : public Error {
 public:
  using Error::Error;
};

/// A diagnostic needs a hypothesis that the assumption checker did not confirm.
class MissingAssumption : public Error {
 public:
  using Error::Error;
};

/// A least-squares fit in log space received a zero or negative error.
class DegenerateFit : public Error {
 public:
  using Error::Error;
};

/// Configuration text could not be parsed. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nlclaw
