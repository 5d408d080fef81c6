#include "u1d/error.hpp"

namespace u1d {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::GaplessPoint: return "GaplessPoint";
    case ErrorCode::UnwrapAmbiguity: return "UnwrapAmbiguity";
    case ErrorCode::ZeroOverlap: return "ZeroOverlap";
    case ErrorCode::NotPlanar: return "NotPlanar";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::DegenerateArg: return "DegenerateArg";
    case ErrorCode::BracketError: return "BracketError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::SpecError: return "SpecError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaError:
    case ErrorCode::InvalidParameter:
    case ErrorCode::SpecError:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace u1d
