#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace annulus {

enum class ErrorCode {
  InvalidInput,
  RhoIsMediant,
  Collision,
  DegenerateOverlap,
  NotNested,
  NotEventuallyRigid,
  NotInvertible,
  SubdivisionOverflow,
  NoRecurrenceDetected,
  EmptyReturns,
  SeedNotOfType,
  VerificationFailed,
  NoSeedFound,
  NotDisjoint,
  BadResolution,
  NotFree,
  NotALine,
  NotSimple,
};

std::string_view to_string(ErrorCode code);

/// Library failure carrying a machine-readable code; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace annulus
