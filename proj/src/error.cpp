#include "annulus/error.hpp"

namespace annulus {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::RhoIsMediant: return "RhoIsMediant";
    case ErrorCode::Collision: return "Collision";
    case ErrorCode::DegenerateOverlap: return "DegenerateOverlap";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::NotEventuallyRigid: return "NotEventuallyRigid";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::SubdivisionOverflow: return "SubdivisionOverflow";
    case ErrorCode::NoRecurrenceDetected: return "NoRecurrenceDetected";
    case ErrorCode::EmptyReturns: return "EmptyReturns";
    case ErrorCode::SeedNotOfType: return "SeedNotOfType";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::NoSeedFound: return "NoSeedFound";
    case ErrorCode::NotDisjoint: return "NotDisjoint";
    case ErrorCode::BadResolution: return "BadResolution";
    case ErrorCode::NotFree: return "NotFree";
    case ErrorCode::NotALine: return "NotALine";
    case ErrorCode::NotSimple: return "NotSimple";
  }
  return "Unknown";
}

}  // namespace annulus
