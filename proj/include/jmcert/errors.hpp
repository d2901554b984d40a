#pragma once

#include <stdexcept>
#include <string>

namespace jmcert {

/// Input that violates a documented precondition. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Vector/configuration sizes do not conform.
class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Scalar argument outside its domain (nonpositive mass, scale, rate...).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Evaluation at a point of the collision locus where the quantity is singular.
class CollisionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Point lies outside a cone beyond the constraint tolerance.
class OutsideConeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Cone or arrangement is geometrically degenerate (empty interior, coincident hyperplanes).
class DegenerateError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Malformed JSON or missing fields.
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A numerical procedure failed to converge. Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jmcert
