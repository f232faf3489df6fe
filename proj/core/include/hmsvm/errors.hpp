#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmsvm {

/// Invalid argument, dimension mismatch or malformed input data.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Cholesky factorization met a non-positive pivot.
class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A weight vector violates the cardinality constraint where it must hold.
class InfeasibleSparsity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace hmsvm
