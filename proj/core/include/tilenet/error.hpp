#pragma once

#include <stdexcept>
#include <string>

namespace tilenet {

// Machine readable failure categories.  The CLI maps each category to a
// stable exit code; library callers can switch on `code()`.
enum class ErrorCode {
  MalformedPolygon = 10,
  ChildOutsideParent = 11,
  CapacityExceeded = 12,
  EmptyPatch = 13,
  NotPrimitive = 20,
  PowerIterationStalled = 21,
  ZeroVector = 22,
  DegeneratePolygon = 30,
  EmptyWindow = 31,
  TooFewPoints = 40,
  EmptySquare = 50,
  WindowTooSmall = 51,
  OutsideSafeRegion = 52,
  NoPerfectMatchingUnderCap = 60,
  SyntaxError = 70,
  SemanticError = 71,
  IoError = 72,
  InvalidArgument = 73,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tilenet
