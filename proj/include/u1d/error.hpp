#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace u1d {

enum class ErrorCode {
  NotHermitian,
  NotPSD,
  NonFinite,
  GaplessPoint,
  UnwrapAmbiguity,
  ZeroOverlap,
  NotPlanar,
  StepTooLarge,
  DegenerateArg,
  BracketError,
  SchemaError,
  InvalidParameter,
  SpecError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// True for failures caused by bad user input (configs, specs, flags) rather
// than by the numerics.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace u1d
