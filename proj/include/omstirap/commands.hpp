#pragma once

#include <span>
#include <string>

#include "omstirap/config.hpp"
#include "omstirap/sweep.hpp"

namespace omstirap {

// Exit codes shared by all commands: 0 success, 2 configuration/usage error,
// 3 numerical failure. Diagnostics go to stderr.

// Writes occupancies.csv (t,n_aL,n_aM,n_aR,n_b1,n_b2) and summary.json into
// config.out_dir.
int cmd_simulate(const RunConfig& config);

// Writes spectrum.csv with branch-tracked eigenvalues (dark branch first),
// the dark-branch gap, the first-order decay shift and the closed-form
// couplings.
int cmd_spectrum(const RunConfig& config);

// Writes sweep.csv (one row per cell) and best.json.
int cmd_sweep(const RunConfig& config, std::span<const std::string> axis_specs);

// Prints the three-level dark-state eigenpair as JSON on stdout.
int cmd_stirap3(double omega_p, double omega_s, double delta_p, double delta_s);

}  // namespace omstirap
