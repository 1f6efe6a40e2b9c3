#include "omstirap/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "omstirap/dynamics.hpp"
#include "omstirap/errors.hpp"
#include "omstirap/meanfield.hpp"

namespace omstirap {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

void apply(SweepParam param, double value, SystemParams& p, PulseSchedule& s) {
  switch (param) {
    case SweepParam::amplitude: s.amplitude = value; break;
    case SweepParam::width: s.width = value; break;
    case SweepParam::half_delay: s.half_delay = value; break;
    case SweepParam::gamma_M: p.gamma_M = value; break;
    case SweepParam::gamma_m: p.gamma_m1 = p.gamma_m2 = value; break;
    case SweepParam::g: p.g1 = p.g2 = value; break;
    case SweepParam::nbar: p.nbar1 = p.nbar2 = value; break;
  }
}

SweepCell run_cell(const SweepBaseline& base, const SystemParams& p,
                   const PulseSchedule& s) {
  SweepCell cell;

  const ValidationReport report = validate_params(p, s);
  if (report.has_errors()) {
    cell.failed = true;
    cell.error = report.findings.front().code + ": " +
                 report.findings.front().message;
    return cell;
  }

  const std::vector<double> grid =
      linspace(s.t_start, s.t_end, base.n_points);
  const MeanFieldTrajectory mft = quasistatic_trajectory(p, s, grid);

  Matrix5cd n0 = Matrix5cd::Zero();
  for (int i = 0; i < 5; ++i) n0(i, i) = base.initial_occupancy[static_cast<std::size_t>(i)];
  const MomentTrajectory moments =
      propagate_moments(p, s, mft, n0, base.rel_tol);

  cell.eta = transfer_efficiency(moments);
  cell.peak_n_aM = 0.0;
  for (const Vector5d& occ : moments.occupancy)
    cell.peak_n_aM = std::max(cell.peak_n_aM, occ(kModeCavityMiddle));

  const SpectralTrajectory spectral =
      spectral_trajectory(p, s, mft, base.convention);

  // Gap metric restricted to the window where both drives exceed 1% of
  // their peak over the grid; outside it extra exact zeros shadow the dark
  // branch.
  double peak_l = 0.0, peak_r = 0.0;
  for (double t : grid) {
    peak_l = std::max(peak_l, std::abs(pulse_left(s, t)));
    peak_r = std::max(peak_r, std::abs(pulse_right(s, t)));
  }
  double min_gap = std::numeric_limits<double>::infinity();
  double integrated = 0.0;
  for (std::size_t i = 0; i < spectral.snapshots.size(); ++i) {
    const SpectralSnapshot& snap = spectral.snapshots[i];
    if (std::abs(pulse_left(s, snap.t)) >= 0.01 * peak_l &&
        std::abs(pulse_right(s, snap.t)) >= 0.01 * peak_r)
      min_gap = std::min(min_gap, snap.gap);
    if (i + 1 < spectral.snapshots.size()) {
      const SpectralSnapshot& next = spectral.snapshots[i + 1];
      integrated += 0.5 * (std::abs(snap.decay_shift) + std::abs(next.decay_shift)) *
                    (next.t - snap.t);
    }
  }
  cell.min_gap = std::isfinite(min_gap) ? min_gap : 0.0;
  cell.integrated_shift = integrated;
  return cell;
}

}  // namespace

std::string_view to_string(SweepParam p) noexcept {
  switch (p) {
    case SweepParam::amplitude: return "A";
    case SweepParam::width: return "T";
    case SweepParam::half_delay: return "tau";
    case SweepParam::gamma_M: return "gamma_M";
    case SweepParam::gamma_m: return "gamma_m";
    case SweepParam::g: return "g";
    case SweepParam::nbar: return "nbar";
  }
  return "?";
}

SweepAxis parse_axis(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos)
    throw SimError(errc::invalid_value,
                   "axis spec must look like name=v1,v2,...");
  const std::string_view name = spec.substr(0, eq);
  SweepAxis axis;
  if (name == "A") axis.param = SweepParam::amplitude;
  else if (name == "T") axis.param = SweepParam::width;
  else if (name == "tau") axis.param = SweepParam::half_delay;
  else if (name == "gamma_M") axis.param = SweepParam::gamma_M;
  else if (name == "gamma_m") axis.param = SweepParam::gamma_m;
  else if (name == "g") axis.param = SweepParam::g;
  else if (name == "nbar") axis.param = SweepParam::nbar;
  else
    throw SimError(errc::invalid_value,
                   "unknown sweep parameter '" + std::string(name) + "'");

  std::string_view rest = spec.substr(eq + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view tok = rest.substr(0, comma);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw SimError(errc::invalid_value,
                     "bad axis value '" + std::string(tok) + "'");
    axis.values.push_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (axis.values.empty())
    throw SimError(errc::invalid_value, "axis value list is empty");
  return axis;
}

SweepResult run_sweep(const SweepBaseline& base, std::span<const SweepAxis> axes,
                      std::size_t cap) {
  if (axes.empty()) throw std::invalid_argument("at least one axis is required");

  std::size_t total = 1;
  for (const SweepAxis& axis : axes) {
    if (axis.values.empty())
      throw std::invalid_argument("axis value list is empty");
    if (axis.values.size() > cap / total)
      throw SimError(errc::grid_too_large,
                     "grid exceeds the configured cap of " + std::to_string(cap));
    total *= axis.values.size();
  }

  SweepResult result;
  result.axes.assign(axes.begin(), axes.end());
  result.cells.reserve(total);

  for (std::size_t index = 0; index < total; ++index) {
    // Row-major decomposition: the last axis varies fastest.
    std::vector<double> values(axes.size());
    std::size_t rem = index;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& vals = axes[a].values;
      values[a] = vals[rem % vals.size()];
      rem /= vals.size();
    }

    SystemParams p = base.params;
    PulseSchedule s = base.schedule;
    for (std::size_t a = 0; a < axes.size(); ++a)
      apply(axes[a].param, values[a], p, s);

    SweepCell cell;
    try {
      cell = run_cell(base, p, s);
    } catch (const std::exception& e) {
      cell = SweepCell{};
      cell.failed = true;
      cell.error = e.what();
    }
    cell.values = std::move(values);
    result.cells.push_back(std::move(cell));
  }
  return result;
}

const SweepCell& best_point(const SweepResult& result) {
  const SweepCell* best = nullptr;
  for (const SweepCell& cell : result.cells) {
    if (cell.failed) continue;
    if (best == nullptr) {
      best = &cell;
      continue;
    }
    if (cell.eta > best->eta) {
      best = &cell;
    } else if (cell.eta == best->eta) {
      if (cell.peak_n_aM < best->peak_n_aM ||
          (cell.peak_n_aM == best->peak_n_aM &&
           std::lexicographical_compare(cell.values.begin(), cell.values.end(),
                                        best->values.begin(),
                                        best->values.end()))) {
        best = &cell;
      }
    }
  }
  if (best == nullptr)
    throw SimError(errc::all_failed, "every sweep cell failed");
  return *best;
}

}  // namespace omstirap
