#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparsepr {

enum class ErrorKind {
  InvalidSignal,
  InvalidAcf,
  InvalidCardinality,
  DegenerateParameter,
  UseDirectFormula,
  SingularSystem,
  InconsistentAcf,
  NotRepresentable,
  GaveUp,
  NotAnAcf,
  ShapeError,
  EmptyInput,
  InvalidBound,
  TooLarge,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSignal: return "InvalidSignal";
    case ErrorKind::InvalidAcf: return "InvalidAcf";
    case ErrorKind::InvalidCardinality: return "InvalidCardinality";
    case ErrorKind::DegenerateParameter: return "DegenerateParameter";
    case ErrorKind::UseDirectFormula: return "UseDirectFormula";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::InconsistentAcf: return "InconsistentAcf";
    case ErrorKind::NotRepresentable: return "NotRepresentable";
    case ErrorKind::GaveUp: return "GaveUp";
    case ErrorKind::NotAnAcf: return "NotAnAcf";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvalidBound: return "InvalidBound";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and tests) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sparsepr
