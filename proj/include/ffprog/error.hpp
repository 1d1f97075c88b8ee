#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ffprog {

enum class ErrorKind {
  NotPrime,
  ReducibleModulus,
  DegreeMismatch,
  DivisionByZero,
  FieldMismatch,
  ElementOutOfField,
  SyntaxError,
  ZeroPolynomial,
  EmptyInput,
  ConstantTerm,
  DuplicatePolynomial,
  DependentSystem,
  InvalidExponent,
  BudgetExceeded,
  NotOneBounded,
  NotL2Normalized,
  ArityMismatch,
  TwistedSystem,
  IndexOutOfRange,
  DegenerateCombination,
  CharacteristicTooSmall,
  InvalidRange,
  InvalidInit,
  ShapeMismatch,
  InsufficientData,
  ThresholdViolation,
  NumericalInconsistency,
  Usage,
};

std::string_view to_string(ErrorKind kind);

/// All library failures are reported through this exception; `kind()` is the
/// machine-readable category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ffprog
