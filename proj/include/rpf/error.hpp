#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rpf {

/// Failure kinds raised by the core library. Each kind belongs to exactly one
/// category, which the command driver maps to a process exit code.
enum class ErrorKind {
  // input / configuration problems
  ParseError,
  ValidationError,
  DuplicateSymbol,
  UnknownSymbol,
  NotEssential,
  NotIrreducible,
  NotIrreducibleChain,
  RangeTooLarge,
  DimensionTooSmall,
  InvalidArgument,
  // structural assertions: the construction did not produce what the theory
  // says it should, usually fixable by a longer search
  RoutingOverlap,
  LanguageMismatch,
  InfiniteDiameter,
  NoWindow,
  AllZero,
  ZeroVector,
  NotAPreimage,
  WordNotInImage,
  NotPeriodicPoint,
  TooManyAssignments,
};

enum class ErrorCategory { Input, Structural };

constexpr ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RoutingOverlap:
    case ErrorKind::LanguageMismatch:
    case ErrorKind::InfiniteDiameter:
    case ErrorKind::NoWindow:
    case ErrorKind::AllZero:
    case ErrorKind::ZeroVector:
    case ErrorKind::NotAPreimage:
    case ErrorKind::WordNotInImage:
    case ErrorKind::NotPeriodicPoint:
    case ErrorKind::TooManyAssignments:
      return ErrorCategory::Structural;
    default:
      return ErrorCategory::Input;
  }
}

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace rpf
