#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liederiv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input. `position` is a 0-based offset into the parsed string.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " (at offset " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A semantic precondition failed (wrong dimension, order too high, form not closed, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ModeMismatch : public PreconditionError {
 public:
  ModeMismatch() : PreconditionError("cannot mix Exact and Approx scalars") {}
};

class DimensionMismatch : public PreconditionError {
 public:
  DimensionMismatch(int a, int b)
      : PreconditionError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

// The requested exact computation has no exact (rational) answer.
class ExactnessUnavailable : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Completeness of the generating vector field cannot be decided (non-affine data).
class Unsupported : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace liederiv
