#pragma once

#include <stdexcept>
#include <string>

namespace mark3d {

enum class ErrorKind {
  DanglingFace,
  NonInvolutive,
  SelfFace,
  BadPermutation,
  InvalidEdge,
  Disconnected,
  NotASurface,
  EulerMismatch,
  NotAdmissible,
  StandardnessLost,
  Inapplicable,
  MarkedEdge,
  ValenceTooSmall,
  InvariantMismatch,
  NotClosed,
  GermCountViolation,
  NotInLink,
  SphereBoundary,
  SyntaxError,
  ValidationError,
  AmbiguousMode,
  IoError,
  PhaseLimit,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mark3d
