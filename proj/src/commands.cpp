#include "omstirap/commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "omstirap/detail/format.hpp"
#include "omstirap/dynamics.hpp"
#include "omstirap/errors.hpp"
#include "omstirap/meanfield.hpp"

namespace omstirap {

namespace {

using detail::format_double;
using ordered_json = nlohmann::ordered_json;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  const fs::path path = fs::path(config.out_dir) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw SimError(errc::invalid_value,
                   "cannot open output file " + path.string());
  return out;
}

// Validation gate shared by the file-producing commands. Errors always
// abort; warnings abort only in strict mode.
ValidationReport check_config(const RunConfig& config) {
  const ValidationReport report =
      validate_params(config.params, config.schedule);
  if (report.has_errors())
    throw SimError(errc::invalid_value,
                   "validation failed: " + report.findings.front().code + " " +
                       report.findings.front().message);
  if (config.strict && report.has_warnings())
    throw SimError(errc::invalid_value,
                   "strict mode: " + report.findings.front().code + " " +
                       report.findings.front().message);
  return report;
}

MeanFieldTrajectory make_mean_field(const RunConfig& config,
                                    std::span<const double> grid) {
  if (config.mean_field == MeanFieldMode::quasi_static)
    return quasistatic_trajectory(config.params, config.schedule, grid);
  const MeanField initial = steady_state(
      config.params, drives_at(config.params, config.schedule, grid.front()));
  return dynamic_trajectory(config.params, config.schedule, grid, initial,
                            config.rel_tol);
}

ordered_json findings_json(const ValidationReport& report) {
  ordered_json arr = ordered_json::array();
  for (const Finding& f : report.findings) {
    arr.push_back({{"severity", f.severity == Severity::error ? "error" : "warning"},
                   {"code", f.code},
                   {"message", f.message}});
  }
  return arr;
}

int classify(const SimError& e) { return is_config_error(e.code()) ? 2 : 3; }

template <class Fn>
int run_command(Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return classify(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

int cmd_simulate(const RunConfig& config) {
  return run_command([&] {
    const ValidationReport report = check_config(config);
    const auto start = std::chrono::steady_clock::now();

    const std::vector<double> grid = linspace(
        config.schedule.t_start, config.schedule.t_end, config.n_points);
    const MeanFieldTrajectory mft = make_mean_field(config, grid);

    Matrix5cd n0 = Matrix5cd::Zero();
    for (int i = 0; i < 5; ++i)
      n0(i, i) = config.initial_occupancy[static_cast<std::size_t>(i)];
    const MomentTrajectory moments = propagate_moments(
        config.params, config.schedule, mft, n0, config.rel_tol);

    const auto stop = std::chrono::steady_clock::now();
    const double runtime = std::chrono::duration<double>(stop - start).count();

    std::ofstream csv = open_output(config, "occupancies.csv");
    csv << "t,n_aL,n_aM,n_aR,n_b1,n_b2\n";
    for (std::size_t i = 0; i < moments.t.size(); ++i) {
      csv << format_double(moments.t[i]);
      for (int k = 0; k < 5; ++k) csv << ',' << format_double(moments.occupancy[i](k));
      csv << '\n';
    }

    double peak_n_am = 0.0;
    for (const Vector5d& occ : moments.occupancy)
      peak_n_am = std::max(peak_n_am, occ(kModeCavityMiddle));

    ordered_json summary;
    try {
      summary["eta"] = transfer_efficiency(moments);
    } catch (const SimError& e) {
      if (e.code() != errc::zero_initial) throw;
      summary["eta"] = nullptr;
    }
    summary["peak_n_aM"] = peak_n_am;
    summary["runtime_seconds"] = runtime;
    summary["findings"] = findings_json(report);

    std::ofstream js = open_output(config, "summary.json");
    js << summary.dump(2) << '\n';

    std::cout << "simulate: " << moments.t.size() << " points, eta = "
              << (summary["eta"].is_null() ? std::string("n/a")
                                           : format_double(summary["eta"].get<double>()))
              << '\n';
  });
}

int cmd_spectrum(const RunConfig& config) {
  return run_command([&] {
    check_config(config);

    const std::vector<double> grid = linspace(
        config.schedule.t_start, config.schedule.t_end, config.n_points);
    const MeanFieldTrajectory mft = make_mean_field(config, grid);
    const SpectralTrajectory spectral = spectral_trajectory(
        config.params, config.schedule, mft, config.decay_shift);

    // Column order: the dark branch first, the rest by their mean real part.
    const int dark = spectral.snapshots.front().dark_index;
    std::array<double, 5> mean_re{};
    for (const SpectralSnapshot& snap : spectral.snapshots)
      for (int k = 0; k < 5; ++k) mean_re[static_cast<std::size_t>(k)] += snap.eigenvalues(k).real();
    std::vector<int> order;
    for (int k = 0; k < 5; ++k)
      if (k != dark) order.push_back(k);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return mean_re[static_cast<std::size_t>(a)] < mean_re[static_cast<std::size_t>(b)];
    });
    order.insert(order.begin(), dark);

    std::ofstream csv = open_output(config, "spectrum.csv");
    csv << "t";
    for (int k = 1; k <= 5; ++k) csv << ",re_l" << k << ",im_l" << k;
    csv << ",gap,re_shift,im_shift,g1aL,g2aR\n";
    for (const SpectralSnapshot& snap : spectral.snapshots) {
      csv << format_double(snap.t);
      for (int k : order) {
        csv << ',' << format_double(snap.eigenvalues(k).real()) << ','
            << format_double(snap.eigenvalues(k).imag());
      }
      const double g1al = config.params.g1 *
                          pulse_left(config.schedule, snap.t) /
                          (-config.params.delta_L);
      const double g2ar = config.params.g2 *
                          pulse_right(config.schedule, snap.t) /
                          (-config.params.delta_R);
      csv << ',' << format_double(snap.gap) << ','
          << format_double(snap.decay_shift.real()) << ','
          << format_double(snap.decay_shift.imag()) << ','
          << format_double(g1al) << ',' << format_double(g2ar) << '\n';
    }

    std::cout << "spectrum: " << spectral.snapshots.size() << " points\n";
  });
}

int cmd_sweep(const RunConfig& config,
              std::span<const std::string> axis_specs) {
  return run_command([&] {
    check_config(config);

    std::vector<SweepAxis> axes;
    axes.reserve(axis_specs.size());
    for (const std::string& spec : axis_specs) axes.push_back(parse_axis(spec));
    if (axes.empty())
      throw SimError(errc::invalid_value, "at least one --axis is required");

    SweepBaseline base;
    base.params = config.params;
    base.schedule = config.schedule;
    base.rel_tol = config.rel_tol;
    base.n_points = config.n_points;
    base.initial_occupancy = config.initial_occupancy;
    base.convention = config.decay_shift;

    const SweepResult result = run_sweep(base, axes);

    std::ofstream csv = open_output(config, "sweep.csv");
    for (const SweepAxis& axis : result.axes) csv << to_string(axis.param) << ',';
    csv << "eta,peak_n_aM,min_gap,integrated_shift,status\n";
    for (const SweepCell& cell : result.cells) {
      for (double v : cell.values) csv << format_double(v) << ',';
      if (cell.failed) {
        csv << ",,,," << "failed\n";
      } else {
        csv << format_double(cell.eta) << ',' << format_double(cell.peak_n_aM)
            << ',' << format_double(cell.min_gap) << ','
            << format_double(cell.integrated_shift) << ",ok\n";
      }
    }

    const SweepCell& best = best_point(result);
    ordered_json bj;
    ordered_json point;
    for (std::size_t a = 0; a < result.axes.size(); ++a)
      point[std::string(to_string(result.axes[a].param))] = best.values[a];
    bj["point"] = point;
    bj["eta"] = best.eta;
    bj["peak_n_aM"] = best.peak_n_aM;
    bj["min_gap"] = best.min_gap;
    bj["integrated_shift"] = best.integrated_shift;

    std::ofstream js = open_output(config, "best.json");
    js << bj.dump(2) << '\n';

    std::cout << "sweep: " << result.cells.size() << " cells, best eta = "
              << format_double(best.eta) << '\n';
  });
}

int cmd_stirap3(double omega_p, double omega_s, double delta_p,
                double delta_s) {
  return run_command([&] {
    const ThreeLevelDark dark =
        three_level_dark_state(omega_p, omega_s, delta_p, delta_s);
    ordered_json out;
    out["eigenvalue"] = dark.eigenvalue;
    out["state"] = {dark.state(0), dark.state(1), dark.state(2)};
    std::cout << out.dump(2) << '\n';
  });
}

}  // namespace omstirap
