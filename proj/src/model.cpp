#include "omstirap/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "omstirap/errors.hpp"

namespace omstirap {

namespace {

bool differs(double a, double b) {
  return std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void require_finite(ValidationReport& report, double v, const char* name) {
  if (!std::isfinite(v)) {
    report.findings.push_back(
        {Severity::error, "NONFINITE", std::string(name) + " is not finite"});
  }
}

void require_nonnegative(ValidationReport& report, double v, const char* name,
                         const char* code) {
  if (std::isfinite(v) && v < 0.0) {
    report.findings.push_back(
        {Severity::error, code, std::string(name) + " must be >= 0"});
  }
}

}  // namespace

bool ValidationReport::has_errors() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::error; });
}

bool ValidationReport::has_warnings() const {
  return std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::warning;
  });
}

bool ValidationReport::has_code(const std::string& code) const {
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.code == code; });
}

ValidationReport validate_params(const SystemParams& p,
                                 const PulseSchedule& s) {
  ValidationReport report;

  require_finite(report, p.delta_L, "delta_L");
  require_finite(report, p.delta_M, "delta_M");
  require_finite(report, p.delta_R, "delta_R");
  require_finite(report, p.omega_m1, "omega_m1");
  require_finite(report, p.omega_m2, "omega_m2");
  require_finite(report, p.g1, "g1");
  require_finite(report, p.g2, "g2");
  require_finite(report, p.j1, "j1");
  require_finite(report, p.j2, "j2");
  require_finite(report, p.gamma_L, "gamma_L");
  require_finite(report, p.gamma_M, "gamma_M");
  require_finite(report, p.gamma_R, "gamma_R");
  require_finite(report, p.gamma_m1, "gamma_m1");
  require_finite(report, p.gamma_m2, "gamma_m2");
  require_finite(report, p.nbar1, "nbar1");
  require_finite(report, p.nbar2, "nbar2");
  require_finite(report, s.amplitude, "amplitude");
  require_finite(report, s.width, "width");
  require_finite(report, s.half_delay, "half_delay");
  require_finite(report, s.t_start, "t_start");
  require_finite(report, s.t_end, "t_end");

  if (std::isfinite(p.omega_m1) && p.omega_m1 <= 0.0)
    report.findings.push_back(
        {Severity::error, "NONPOSITIVE_FREQUENCY", "omega_m1 must be > 0"});
  if (std::isfinite(p.omega_m2) && p.omega_m2 <= 0.0)
    report.findings.push_back(
        {Severity::error, "NONPOSITIVE_FREQUENCY", "omega_m2 must be > 0"});

  require_nonnegative(report, p.gamma_L, "gamma_L", "NEGATIVE_DECAY");
  require_nonnegative(report, p.gamma_M, "gamma_M", "NEGATIVE_DECAY");
  require_nonnegative(report, p.gamma_R, "gamma_R", "NEGATIVE_DECAY");
  require_nonnegative(report, p.gamma_m1, "gamma_m1", "NEGATIVE_DECAY");
  require_nonnegative(report, p.gamma_m2, "gamma_m2", "NEGATIVE_DECAY");
  require_nonnegative(report, p.nbar1, "nbar1", "NEGATIVE_OCCUPANCY");
  require_nonnegative(report, p.nbar2, "nbar2", "NEGATIVE_OCCUPANCY");
  require_nonnegative(report, s.amplitude, "amplitude", "NEGATIVE_AMPLITUDE");

  if (std::isfinite(s.width) && s.width <= 0.0)
    report.findings.push_back(
        {Severity::error, "NONPOSITIVE_WIDTH", "width must be > 0"});
  if (std::isfinite(s.t_start) && std::isfinite(s.t_end) &&
      s.t_start >= s.t_end)
    report.findings.push_back(
        {Severity::error, "INVALID_WINDOW", "t_start must be < t_end"});

  if (report.has_errors()) return report;

  // Red-sideband resonance: every detuning equal to every membrane frequency.
  {
    const double deltas[] = {p.delta_L, p.delta_M, p.delta_R};
    const double omegas[] = {p.omega_m1, p.omega_m2};
    bool broken = false;
    for (double d : deltas)
      for (double w : omegas) broken = broken || differs(d, w);
    if (broken) {
      report.findings.push_back({Severity::warning, "RED_SIDEBAND",
                                 "detunings are not matched to the membrane "
                                 "frequencies; beam-splitter resonance broken"});
    }
  }

  if (differs(p.j1, 0.5 * p.omega_m1) || differs(p.j2, 0.5 * p.omega_m2)) {
    report.findings.push_back(
        {Severity::warning, "LINEAR_COUPLING",
         "tunneling J_k != omega_mk/2; displacement coupling is not linear"});
  }

  // Weak-coupling / RWA margin with |alpha| estimated as A/|delta'|.
  {
    const double inf = std::numeric_limits<double>::infinity();
    const double est_L =
        p.delta_L != 0.0 ? s.amplitude / std::abs(p.delta_L) : (s.amplitude > 0.0 ? inf : 0.0);
    const double est_R =
        p.delta_R != 0.0 ? s.amplitude / std::abs(p.delta_R) : (s.amplitude > 0.0 ? inf : 0.0);
    const double max_coupling =
        std::max(std::abs(p.g1) * est_L, std::abs(p.g2) * est_R);
    if (max_coupling >= 0.5 * std::min(p.omega_m1, p.omega_m2)) {
      report.findings.push_back(
          {Severity::warning, "WEAK_COUPLING",
           "estimated g|alpha| reaches half the membrane frequency; the "
           "rotating-wave approximation is marginal"});
    }
  }

  return report;
}

double pulse_left(const PulseSchedule& s, double t) {
  const double u = (t - s.half_delay) / s.width;
  return s.amplitude * std::exp(-u * u);
}

double pulse_right(const PulseSchedule& s, double t) {
  const double u = (t + s.half_delay) / s.width;
  return s.amplitude * std::exp(-u * u);
}

double pulse_middle(const SystemParams& p, const PulseSchedule& s, double t) {
  if (p.delta_L == 0.0 || p.delta_R == 0.0)
    throw SimError(errc::zero_detuning,
                   "middle-drive synthesis requires nonzero detunings");
  return p.j1 * pulse_left(s, t) / (-p.delta_L) +
         p.j2 * pulse_right(s, t) / (-p.delta_R);
}

double thermal_occupancy(double ratio) {
  if (std::isnan(ratio) || ratio <= 0.0)
    throw SimError(errc::nonpositive_ratio,
                   "hbar*omega/(kB*T) must be positive");
  if (std::isinf(ratio)) return 0.0;
  return 1.0 / std::expm1(ratio);
}

}  // namespace omstirap
