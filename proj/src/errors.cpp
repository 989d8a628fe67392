#include "flatspot/errors.hpp"

namespace flatspot {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "ConfigError";
    case ErrorKind::unvalidated_map: return "UnvalidatedMap";
    case ErrorKind::validation_rejected: return "ValidationRejected";
    case ErrorKind::precision_exhausted: return "PrecisionExhausted";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::flat_spot_domain: return "FlatSpotDomain";
    case ErrorKind::non_monotone: return "NonMonotone";
    case ErrorKind::insufficient_accuracy: return "InsufficientAccuracy";
    case ErrorKind::orbit_too_short: return "OrbitTooShort";
    case ErrorKind::undefined_at_level: return "UndefinedAtLevel";
    case ErrorKind::nonpositive_scaling: return "NonpositiveScaling";
    case ErrorKind::side_case_undetermined: return "SideCaseUndetermined";
    case ErrorKind::degenerate_quadruple: return "DegenerateQuadruple";
    case ErrorKind::flat_spot_hit: return "FlatSpotHit";
    case ErrorKind::chain_invalid: return "ChainInvalid";
    case ErrorKind::ordering_violation: return "OrderingViolation";
    case ErrorKind::inadmissible_sequence: return "InadmissibleSequence";
    case ErrorKind::not_found: return "NotFound";
    case ErrorKind::length_mismatch: return "LengthMismatch";
    case ErrorKind::inconclusive_window: return "InconclusiveWindow";
  }
  return "Unknown";
}

}  // namespace flatspot

namespace flatspot {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::undefined_at_level:
    case ErrorKind::inadmissible_sequence:
    case ErrorKind::length_mismatch:
    case ErrorKind::ordering_violation:
    case ErrorKind::degenerate_quadruple:
    case ErrorKind::chain_invalid:
      return 2;
    case ErrorKind::validation_rejected:
    case ErrorKind::unvalidated_map:
    case ErrorKind::non_monotone:
      return 4;
    default:
      return 3;
  }
}

}  // namespace flatspot
