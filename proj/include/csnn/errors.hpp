#pragma once

#include <stdexcept>
#include <string>

namespace csnn {

enum class ErrorCode {
  ParseError,        // malformed file / rational literal
  InvalidLevelSet,   // fewer than two levels, unsorted, or 0 missing
  InvalidSpec,       // network / config validation failure
  InvalidEpisode,    // negative or non-finite impulse times
  NoSuccessor,       // succ() requested at the maximal level
  NoPredecessor,     // pred() requested at the minimal level
  IllegalTransition, // spike applied past an extreme level
  NotAcyclic,        // acyclic-only operation on a cyclic graph
  NotRealizable,     // activation not piecewise constant on half-open slices
  BoxTooLarge,       // fixed-point enumeration over the configured limit
  InvariantViolation // internal bookkeeping broke; always a bug
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-checkable code next to the human message.
class SnnError : public std::runtime_error {
public:
  SnnError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::InvalidLevelSet: return "InvalidLevelSet";
  case ErrorCode::InvalidSpec: return "InvalidSpec";
  case ErrorCode::InvalidEpisode: return "InvalidEpisode";
  case ErrorCode::NoSuccessor: return "NoSuccessor";
  case ErrorCode::NoPredecessor: return "NoPredecessor";
  case ErrorCode::IllegalTransition: return "IllegalTransition";
  case ErrorCode::NotAcyclic: return "NotAcyclic";
  case ErrorCode::NotRealizable: return "NotRealizable";
  case ErrorCode::BoxTooLarge: return "BoxTooLarge";
  case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "UnknownError";
}

} // namespace csnn
