#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "omstirap/model.hpp"
#include "omstirap/spectral.hpp"
#include "omstirap/types.hpp"

namespace omstirap {

enum class SweepParam {
  amplitude,   // "A"
  width,       // "T"
  half_delay,  // "tau"
  gamma_M,     // "gamma_M"
  gamma_m,     // "gamma_m"  (both membranes)
  g,           // "g"        (both couplings)
  nbar,        // "nbar"     (both baths)
};

std::string_view to_string(SweepParam p) noexcept;

struct SweepAxis {
  SweepParam param;
  std::vector<double> values;  // nonempty
};

// Parses "name=v1,v2,..." with name from {A, T, tau, gamma_M, gamma_m, g,
// nbar}. Throws SimError(errc::invalid_value) on malformed specs.
SweepAxis parse_axis(std::string_view spec);

struct SweepCell {
  std::vector<double> values;  // one per axis, canonical row-major order
  bool failed = false;
  std::string error;  // set when failed
  double eta = 0.0;
  double peak_n_aM = 0.0;
  double min_gap = 0.0;          // over the window where both couplings
                                 // exceed 1% of their peaks
  double integrated_shift = 0.0; // trapezoidal integral of |first-order shift|
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<SweepCell> cells;  // row-major over the axes
};

// Shared per-cell pipeline settings; defaults mirror the CLI defaults.
struct SweepBaseline {
  SystemParams params = SystemParams::defaults();
  PulseSchedule schedule = PulseSchedule::defaults();
  double rel_tol = 1e-9;
  int n_points = 601;
  std::array<double, 5> initial_occupancy = {0.0, 0.0, 0.0, 1.0, 0.0};
  ShiftConvention convention = ShiftConvention::paper;
};

// Runs the mean-field + moment + spectral pipeline over the Cartesian grid.
// Per-cell failures are recorded in place and do not abort the sweep. Output
// is deterministic and canonical-ordered. Throws
// SimError(errc::grid_too_large) when the product of axis sizes exceeds cap.
SweepResult run_sweep(const SweepBaseline& base, std::span<const SweepAxis> axes,
                      std::size_t cap = 100000);

// Cell maximizing eta; ties broken by smaller peak middle-cavity occupancy,
// then lexicographically by parameter tuple. Throws
// SimError(errc::all_failed) when no cell succeeded.
const SweepCell& best_point(const SweepResult& result);

}  // namespace omstirap
