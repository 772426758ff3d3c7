#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seshadri {

enum class ErrorCode {
  DivisionByZero,
  MixedContext,
  SquareDiscriminant,
  NotNormalizable,
  NotAmple,
  SquareSelfIntersection,
  NonpositiveLength,
  InvalidRange,
  BadInput,
  SquareE,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::MixedContext: return "MixedContext";
    case ErrorCode::SquareDiscriminant: return "SquareDiscriminant";
    case ErrorCode::NotNormalizable: return "NotNormalizable";
    case ErrorCode::NotAmple: return "NotAmple";
    case ErrorCode::SquareSelfIntersection: return "SquareSelfIntersection";
    case ErrorCode::NonpositiveLength: return "NonpositiveLength";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::SquareE: return "SquareE";
  }
  return "Unknown";
}

/// Every library failure is reported through this type; `code()` identifies
/// the failing precondition.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace seshadri
