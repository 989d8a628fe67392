#pragma once

#include <stdexcept>
#include <string>

namespace flatspot {

enum class ErrorKind {
  config,
  unvalidated_map,
  validation_rejected,
  precision_exhausted,
  budget_exceeded,
  flat_spot_domain,
  non_monotone,
  insufficient_accuracy,
  orbit_too_short,
  undefined_at_level,
  nonpositive_scaling,
  side_case_undetermined,
  degenerate_quadruple,
  flat_spot_hit,
  chain_invalid,
  ordering_violation,
  inadmissible_sequence,
  not_found,
  length_mismatch,
  inconclusive_window,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a machine-readable kind; the
// CLI maps kinds onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace flatspot

namespace flatspot {

// Process exit status for a failure: 2 configuration, 3 numeric budget,
// 4 validation.
int exit_code(ErrorKind kind) noexcept;

}  // namespace flatspot
