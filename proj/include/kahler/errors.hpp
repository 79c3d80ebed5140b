#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kahler {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text or system file.
class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnknownSymbol, IndexOutOfRange };

  ParseError(Kind kind, std::size_t position, const std::string& message)
      : Error(message + " (at column " + std::to_string(position + 1) + ")"),
        kind_(kind),
        position_(position) {}

  Kind kind() const noexcept { return kind_; }
  /// Zero-based character offset into the parsed text.
  std::size_t position() const noexcept { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

/// Division by zero or logarithm of zero during numeric evaluation.
class EvaluationDomainError : public Error {
 public:
  EvaluationDomainError(const std::string& what, std::string subtree)
      : Error(what + " in '" + subtree + "'"), subtree_(std::move(subtree)) {}

  const std::string& subtree() const noexcept { return subtree_; }

 private:
  std::string subtree_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Bad construction arguments (masses, dimensions, gate violations).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised when a Lagrangian or constraint applies conj/re/im to a coordinate.
class NonHolomorphicInput : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidMetric : public Error {
 public:
  using Error::Error;
};

/// Linear-solve failures carry the pivot-ratio condition estimate.
class SolveError : public Error {
 public:
  SolveError(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// The Lagrangian 2-form is degenerate at the state.
class SingularKahlerMatrix : public SolveError {
 public:
  using SolveError::SolveError;
};

/// The constrained saddle system is rank-deficient.
class InconsistentConstraints : public SolveError {
 public:
  using SolveError::SolveError;
};

/// Malformed system-definition file; the message is prefixed with
/// "<source>:<line>: ".
class SystemFileError : public Error {
 public:
  SystemFileError(const std::string& source, int line, const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

class RankDeficientConstraints : public Error {
 public:
  using Error::Error;
};

}  // namespace kahler
