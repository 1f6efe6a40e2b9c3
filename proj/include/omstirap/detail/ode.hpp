#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "omstirap/errors.hpp"

namespace omstirap::detail {

// Dormand-Prince 5(4) with Hairer's quartic dense-output interpolant.
// State must be a fixed-size Eigen vector/matrix (real or complex scalars).
//
// rhs(t, y, dydt) fills the derivative; sample(tq, yq) is invoked for every
// grid point in ascending order (grid must lie within [t0, t1] and be
// strictly increasing); post_step(y) may adjust the state after each
// accepted step (e.g. re-Hermitization) and is also applied to sampled
// values.
template <class State, class Rhs, class Sample, class PostStep>
void integrate_dopri5(Rhs&& rhs, State y, double t0, double t1,
                      std::span<const double> grid, double rtol, double atol,
                      Sample&& sample, PostStep&& post_step) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // 5th-minus-4th order error weights.
  static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                          e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                          e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;
  // Dense-output weights.
  static constexpr double d1 = -12715105075.0 / 11282082432.0;
  static constexpr double d3 = 87487479700.0 / 32700410799.0;
  static constexpr double d4 = -10690763975.0 / 1880347072.0;
  static constexpr double d5 = 701980252875.0 / 199316789632.0;
  static constexpr double d6 = -1453857185.0 / 822651844.0;
  static constexpr double d7 = 69997945.0 / 29380423.0;

  const double span = t1 - t0;
  if (!(span > 0.0)) throw SimError(errc::step_failure, "empty time span");
  if (!(rtol > 0.0)) throw SimError(errc::step_failure, "tolerance must be positive");

  auto err_norm = [&](const State& y0, const State& y1, const State& e) {
    double sum = 0.0;
    const auto* p0 = y0.data();
    const auto* p1 = y1.data();
    const auto* pe = e.data();
    const auto n = static_cast<std::size_t>(y0.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double sc =
          atol + rtol * std::max(std::abs(p0[i]), std::abs(p1[i]));
      const double q = std::abs(pe[i]) / sc;
      sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(n));
  };

  double t = t0;
  State k1(y), k2(y), k3(y), k4(y), k5(y), k6(y), k7(y), ytmp(y), ynew(y),
      yerr(y);
  rhs(t, y, k1);

  // Initial step from the scaled derivative magnitude.
  double h;
  {
    double dy = 0.0;
    const auto* pf = k1.data();
    const auto* py = y.data();
    const auto n = static_cast<std::size_t>(y.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = atol + rtol * std::abs(py[i]);
      dy = std::max(dy, std::abs(pf[i]) / sc);
    }
    h = (dy > 0.0) ? 0.01 / dy : span / 100.0;
    h = std::min(h, span);
  }

  std::size_t next_sample = 0;
  if (!grid.empty() && grid.front() <= t0) {
    sample(grid.front(), y);
    ++next_sample;
  }

  const double hmin_floor = 16.0 * std::numeric_limits<double>::epsilon();
  bool rejected = false;
  std::size_t step_count = 0;
  constexpr std::size_t kMaxSteps = 50'000'000;

  while (t < t1) {
    if (++step_count > kMaxSteps)
      throw SimError(errc::step_failure, "step count limit exceeded");
    if (h < hmin_floor * std::max(std::abs(t), 1.0))
      throw SimError(errc::step_failure,
                     "cannot meet tolerance with the minimum step at t = " +
                         std::to_string(t));
    if (t + h > t1) h = t1 - t;

    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7);

    yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = err_norm(y, ynew, yerr);

    if (err <= 1.0) {
      // Serve dense output for grid points inside (t, t+h].
      if (next_sample < grid.size() && grid[next_sample] <= t + h) {
        const State rcont2 = ynew - y;
        const State rcont3 = h * k1 - rcont2;
        const State rcont4 = rcont2 - h * k7 - rcont3;
        const State rcont5 =
            h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (next_sample < grid.size() && grid[next_sample] <= t + h) {
          const double theta = (grid[next_sample] - t) / h;
          State yq = y + theta * (rcont2 +
                                  (1.0 - theta) *
                                      (rcont3 + theta * (rcont4 +
                                                         (1.0 - theta) * rcont5)));
          post_step(yq);
          sample(grid[next_sample], yq);
          ++next_sample;
        }
      }
      t += h;
      y = ynew;
      post_step(y);
      rhs(t, y, k1);  // refresh the first stage after any state adjustment
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      fac = std::min(rejected ? 1.0 : 10.0, std::max(0.2, fac));
      h *= fac;
      rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      rejected = true;
    }
  }

  // Grid points coinciding with t1 up to roundoff.
  while (next_sample < grid.size() &&
         grid[next_sample] <= t1 + 1e-12 * std::max(1.0, std::abs(t1))) {
    sample(grid[next_sample], y);
    ++next_sample;
  }
  if (next_sample != grid.size())
    throw SimError(errc::step_failure, "grid extends beyond the time span");
}

}  // namespace omstirap::detail
