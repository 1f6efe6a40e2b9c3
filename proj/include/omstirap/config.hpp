#pragma once

#include <array>
#include <string>
#include <string_view>

#include "omstirap/model.hpp"
#include "omstirap/spectral.hpp"

namespace omstirap {

enum class MeanFieldMode { quasi_static, dynamic };

// Fully-resolved run configuration. Defaults are the baseline transfer
// scenario over the window [-15, 15].
struct RunConfig {
  SystemParams params;
  PulseSchedule schedule;
  double rel_tol = 1e-9;
  int n_points = 601;
  std::array<double, 5> initial_occupancy = {0.0, 0.0, 0.0, 1.0, 0.0};
  std::string out_dir = ".";
  MeanFieldMode mean_field = MeanFieldMode::quasi_static;
  ShiftConvention decay_shift = ShiftConvention::paper;
  bool strict = false;

  bool operator==(const RunConfig&) const = default;
};

// Parses a line-based `key = value` document ('#' starts a comment). Every
// key is optional; unknown keys, malformed lines and out-of-range values are
// rejected with SimError codes UNKNOWN_KEY, PARSE_ERROR (with the line
// number) and INVALID_VALUE (naming the key).
RunConfig parse_config(std::string_view text);

// Canonical full-precision rendering; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace omstirap
