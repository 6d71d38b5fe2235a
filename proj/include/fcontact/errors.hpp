#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fcontact {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Singular arithmetic while evaluating a component function
/// (division by zero, negative power of zero).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// Mismatched dimensions between tensors, charts or arguments.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/// Syntax or resolution failure in the expression language.
/// Offsets are 0-based bytes; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        offset_(offset),
        line_(line),
        column_(column) {}

  std::size_t offset() const { return offset_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::size_t offset_;
  int line_;
  int column_;
};

/// An operation was called on inputs that violate its documented
/// preconditions (non-orthogonal matrix, non-basic form, ...).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// Malformed configuration document.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Iterative solver exhausted its budget.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}

  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace fcontact
