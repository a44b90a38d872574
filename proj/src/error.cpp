#include "rpf/error.hpp"

namespace rpf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::NotEssential: return "NotEssential";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NotIrreducibleChain: return "NotIrreducibleChain";
    case ErrorKind::RangeTooLarge: return "RangeTooLarge";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::RoutingOverlap: return "RoutingOverlap";
    case ErrorKind::LanguageMismatch: return "LanguageMismatch";
    case ErrorKind::InfiniteDiameter: return "InfiniteDiameter";
    case ErrorKind::NoWindow: return "NoWindow";
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotAPreimage: return "NotAPreimage";
    case ErrorKind::WordNotInImage: return "WordNotInImage";
    case ErrorKind::NotPeriodicPoint: return "NotPeriodicPoint";
    case ErrorKind::TooManyAssignments: return "TooManyAssignments";
  }
  return "Unknown";
}

}  // namespace rpf
