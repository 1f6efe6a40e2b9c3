#pragma once

#include <stdexcept>
#include <string>

namespace omstirap {

// Failure categories surfaced by the library. The CLI maps configuration
// codes to exit 2 and numerical codes to exit 3.
enum class errc {
  zero_detuning,
  nonpositive_ratio,
  singular_system,
  step_failure,
  psd_violation,
  negative_occupancy,
  zero_initial,
  no_convergence,
  precondition_violated,
  degenerate_nullspace,
  overflow,
  grid_too_large,
  all_failed,
  parse_error,
  unknown_key,
  invalid_value,
  zero_fields,
};

const char* to_string(errc code) noexcept;

// True for codes caused by bad configuration or usage rather than by the
// numerics of a run.
bool is_config_error(errc code) noexcept;

class SimError : public std::runtime_error {
public:
  SimError(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

}  // namespace omstirap
