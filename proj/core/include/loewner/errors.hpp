#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loewner {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// Cyclic Jacobi did not reach the off-diagonal threshold within its sweep cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, double margin)
      : Error(what), margin_(margin) {}
  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

/// Function evaluated outside its declared domain, or an arithmetic domain
/// failure during evaluation (log of a non-positive, division by zero, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  enum class Kind { Syntax, UnknownVariable, UnknownFunction };

  ParseError(Kind kind, std::size_t position, const std::string& what)
      : Error(what + " at position " + std::to_string(position)),
        kind_(kind),
        position_(position) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

class NonCommuting : public Error {
 public:
  NonCommuting(const std::string& what, std::size_t first, std::size_t second,
               double residual)
      : Error(what), first_(first), second_(second), residual_(residual) {}
  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t first_;
  std::size_t second_;
  double residual_;
};

/// A checker precondition (e.g. 0 <= x_i <= y_i) failed. Distinct from a
/// violation verdict: the instance is not admissible at all.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration: bad index, bad tolerance override, size guard.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace loewner
