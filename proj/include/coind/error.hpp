#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coind {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Premisses outside the domain of a rule's (partial) conclusion function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A lazy or cyclic object did not expose a rule node within the guard budget.
class NonProductive : public Error {
 public:
  using Error::Error;
};

/// An operation that needs a finite state graph met an unbounded lazy object.
class NotRegular : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnboundBackEdge : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class BadPath : public Error {
 public:
  using Error::Error;
};

class StepNotApplicable : public Error {
 public:
  using Error::Error;
};

class EndpointMismatch : public Error {
 public:
  using Error::Error;
};

class OrdinalNotLarger : public Error {
 public:
  using Error::Error;
};

class OrdinalViolation : public Error {
 public:
  using Error::Error;
};

class WellFoundednessExhausted : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NotLinear : public Error {
 public:
  using Error::Error;
};

class MissingVariableWitness : public Error {
 public:
  using Error::Error;
};

class NotARedex : public Error {
 public:
  using Error::Error;
};

class UnresolvedIndex : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class NotPartitionable : public Error {
 public:
  using Error::Error;
};

/// A library invariant broke; indicates a bug rather than bad input.
class InternalInvariant : public Error {
 public:
  using Error::Error;
};

}  // namespace coind
