#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridsched {

enum class ErrorCode {
  InvalidInstance,
  InvalidAlpha,
  UnassignedJob,
  InfeasibleAssignment,
  InputClassViolation,
  InfeasibleOutcome,
  NotLoose,
  NotAgreeable,
  NoFeasibleSlot,
  EmptyInstance,
  InfeasibleInstance,
  NotUnitWidth,
  TooLarge,
  AlgorithmStalled,
  UnsatisfiableConstraint,
  ArithmeticOverflow,
  Parse,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every module. The code identifies the violated
/// precondition; the message names the offending job or value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gridsched
