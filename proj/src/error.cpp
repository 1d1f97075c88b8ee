#include "ffprog/error.hpp"

namespace ffprog {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ReducibleModulus: return "ReducibleModulus";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ElementOutOfField: return "ElementOutOfField";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ConstantTerm: return "ConstantTerm";
    case ErrorKind::DuplicatePolynomial: return "DuplicatePolynomial";
    case ErrorKind::DependentSystem: return "DependentSystem";
    case ErrorKind::InvalidExponent: return "InvalidExponent";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotOneBounded: return "NotOneBounded";
    case ErrorKind::NotL2Normalized: return "NotL2Normalized";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::TwistedSystem: return "TwistedSystem";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::DegenerateCombination: return "DegenerateCombination";
    case ErrorKind::CharacteristicTooSmall: return "CharacteristicTooSmall";
    case ErrorKind::InvalidRange: return "InvalidRange";
    case ErrorKind::InvalidInit: return "InvalidInit";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::ThresholdViolation: return "ThresholdViolation";
    case ErrorKind::NumericalInconsistency: return "NumericalInconsistency";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

}  // namespace ffprog
