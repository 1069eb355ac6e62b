#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace genflag {

enum class ErrorCode {
  NonSquare,
  SingularBasis,
  LabelCollision,
  NotAChain,
  ZeroVector,
  NontrivialBasis,
  NotIndependent,
  LevelTooSmall,
  TypeMismatch,
  Incommensurable,
  DegeneratePrefix,
  FieldObstruction,
  PositionInvisible,
  InvalidWeights,
  Unsupported,
  SyntaxError,
  SemanticError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::LabelCollision: return "LabelCollision";
    case ErrorCode::NotAChain: return "NotAChain";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NontrivialBasis: return "NontrivialBasis";
    case ErrorCode::NotIndependent: return "NotIndependent";
    case ErrorCode::LevelTooSmall: return "LevelTooSmall";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::Incommensurable: return "Incommensurable";
    case ErrorCode::DegeneratePrefix: return "DegeneratePrefix";
    case ErrorCode::FieldObstruction: return "FieldObstruction";
    case ErrorCode::PositionInvisible: return "PositionInvisible";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
  }
  return "Unknown";
}

/// All library failures are reported through this exception; `code()` names
/// the failure class so callers (and the CLI) can map it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace genflag
