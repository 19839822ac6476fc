#pragma once

#include <stdexcept>
#include <string>

namespace lipframe {

/// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A point failed the subset predicate it was required to satisfy.
class MembershipError : public Error {
 public:
  using Error::Error;
};

class SamplerExhausted : public Error {
 public:
  using Error::Error;
};

/// Length, exponent or subset disagreement between two frames or a frame and a vector.
class FrameMismatch : public Error {
 public:
  using Error::Error;
};

/// A named precondition of a construction did not hold on the checked samples.
class PreconditionError : public Error {
 public:
  PreconditionError(std::string check, const std::string& detail)
      : Error("precondition '" + check + "' failed: " + detail), check_(std::move(check)) {}

  const std::string& check() const noexcept { return check_; }

 private:
  std::string check_;
};

/// Base for numerical failures of the iterative frame-map inversion.
class SolverError : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public SolverError {
 public:
  using SolverError::SolverError;
};

class Divergence : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Malformed frame file or fixture id. The field name is kept for messages.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& detail)
      : Error("field '" + field + "': " + detail), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace lipframe
