#include "omstirap/errors.hpp"

namespace omstirap {

const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::zero_detuning: return "ZERO_DETUNING";
    case errc::nonpositive_ratio: return "NONPOSITIVE_RATIO";
    case errc::singular_system: return "SINGULAR_SYSTEM";
    case errc::step_failure: return "STEP_FAILURE";
    case errc::psd_violation: return "PSD_VIOLATION";
    case errc::negative_occupancy: return "NEGATIVE_OCCUPANCY";
    case errc::zero_initial: return "ZERO_INITIAL";
    case errc::no_convergence: return "NO_CONVERGENCE";
    case errc::precondition_violated: return "PRECONDITION_VIOLATED";
    case errc::degenerate_nullspace: return "DEGENERATE_NULLSPACE";
    case errc::overflow: return "OVERFLOW";
    case errc::grid_too_large: return "GRID_TOO_LARGE";
    case errc::all_failed: return "ALL_FAILED";
    case errc::parse_error: return "PARSE_ERROR";
    case errc::unknown_key: return "UNKNOWN_KEY";
    case errc::invalid_value: return "INVALID_VALUE";
    case errc::zero_fields: return "ZERO_FIELDS";
  }
  return "UNKNOWN";
}

bool is_config_error(errc code) noexcept {
  switch (code) {
    case errc::parse_error:
    case errc::unknown_key:
    case errc::invalid_value:
    case errc::grid_too_large:
    case errc::zero_fields:
      return true;
    default:
      return false;
  }
}

}  // namespace omstirap
