#pragma once

#include <string>
#include <vector>

namespace omstirap {

// Physical rates of the three-sub-cavity / two-membrane system, all
// dimensionless multiples of the 1 MHz reference rate. Time is measured in
// the reciprocal unit.
struct SystemParams {
  double delta_L = 1.0;  // modified detunings of the driven cavity modes
  double delta_M = 1.0;
  double delta_R = 1.0;
  double omega_m1 = 1.0;  // membrane frequencies
  double omega_m2 = 1.0;
  double g1 = 1e-3;  // single-photon optomechanical couplings
  double g2 = 1e-3;
  double j1 = 0.5;  // inter-cavity tunneling rates
  double j2 = 0.5;
  double gamma_L = 0.4;  // cavity decay rates
  double gamma_M = 0.4;
  double gamma_R = 0.4;
  double gamma_m1 = 1e-4;  // membrane decay rates
  double gamma_m2 = 1e-4;
  double nbar1 = 0.0;  // bath thermal occupancies
  double nbar2 = 0.0;

  // Baseline transfer scenario (red-sideband resonant, weakly coupled).
  static SystemParams defaults() { return SystemParams{}; }

  bool operator==(const SystemParams&) const = default;
};

// Gaussian drive pair with a counter-intuitive delay: the right drive peaks
// at t = -half_delay, the left at t = +half_delay.
struct PulseSchedule {
  double amplitude = 350.0;
  double width = 3.0;
  double half_delay = 1.0;
  double t_start = -15.0;  // integration window; both envelopes are below
  double t_end = 15.0;     // 1.5e-5 * amplitude at the default bounds

  static PulseSchedule defaults() { return PulseSchedule{}; }

  bool operator==(const PulseSchedule&) const = default;
};

enum class Severity { warning, error };

struct Finding {
  Severity severity;
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
  bool has_errors() const;
  bool has_warnings() const;
  bool has_code(const std::string& code) const;
};

// Checks finiteness/sign constraints (errors) and the modelling conditions
// (warnings): red-sideband resonance delta'_j = omega_mk, the linear
// displacement-coupling choice J_k = omega_mk / 2, and the weak-coupling
// requirement g_k |alpha| < omega_m / 2 with alpha estimated as A/|delta'|.
// Never throws; callers decide whether warnings abort.
ValidationReport validate_params(const SystemParams& params,
                                 const PulseSchedule& schedule);

// Drive envelopes. The left pulse peaks at +half_delay, the right at
// -half_delay; the middle drive is the fixed linear combination that nulls
// the middle-cavity amplitude in the decay-free steady state.
double pulse_left(const PulseSchedule& schedule, double t);
double pulse_right(const PulseSchedule& schedule, double t);

// Throws SimError(errc::zero_detuning) if either detuning vanishes.
double pulse_middle(const SystemParams& params, const PulseSchedule& schedule,
                    double t);

// Bose-Einstein occupancy 1/(exp(ratio) - 1) for ratio = hbar*omega/(kB*T).
// ratio may be +infinity (zero temperature). Throws
// SimError(errc::nonpositive_ratio) for ratio <= 0 or NaN.
double thermal_occupancy(double ratio);

}  // namespace omstirap
