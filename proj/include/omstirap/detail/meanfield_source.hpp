#pragma once

#include <algorithm>
#include <cstddef>

#include "omstirap/meanfield.hpp"
#include "omstirap/model.hpp"
#include "omstirap/types.hpp"

namespace omstirap::detail {

// Mean field as a function of time: quasi-static trajectories are
// re-evaluated exactly (pure function of t), dynamic ones interpolated with
// cubic Hermite (Catmull-Rom slopes) between grid nodes.
class MeanFieldSource {
public:
  MeanFieldSource(const SystemParams& params, const PulseSchedule& schedule,
                  const MeanFieldTrajectory& mft)
      : params_(params), schedule_(schedule), mft_(mft) {}

  MeanField at(double t) const {
    if (mft_.kind == TrajectoryKind::quasi_static)
      return steady_state(params_, drives_at(params_, schedule_, t));
    return interpolate(t);
  }

private:
  MeanField interpolate(double t) const {
    const auto& ts = mft_.t;
    const auto n = ts.size();
    if (t <= ts.front()) return mft_.states.front();
    if (t >= ts.back()) return mft_.states.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - ts.begin()) - 1;
    const double h = ts[k + 1] - ts[k];
    const double u = (t - ts[k]) / h;

    auto comp = [&](auto get) {
      const complexd y0 = get(mft_.states[k]);
      const complexd y1 = get(mft_.states[k + 1]);
      const complexd m0 = k > 0
                              ? (y1 - get(mft_.states[k - 1])) / (ts[k + 1] - ts[k - 1])
                              : (y1 - y0) / h;
      const complexd m1 = k + 2 < n
                              ? (get(mft_.states[k + 2]) - y0) / (ts[k + 2] - ts[k])
                              : (y1 - y0) / h;
      const double u2 = u * u, u3 = u2 * u;
      return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * m0 +
             (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * h * m1;
    };

    MeanField mf;
    mf.alpha_L = comp([](const MeanField& s) { return s.alpha_L; });
    mf.alpha_M = comp([](const MeanField& s) { return s.alpha_M; });
    mf.alpha_R = comp([](const MeanField& s) { return s.alpha_R; });
    mf.beta_1 = comp([](const MeanField& s) { return s.beta_1; });
    mf.beta_2 = comp([](const MeanField& s) { return s.beta_2; });
    return mf;
  }

  const SystemParams& params_;
  const PulseSchedule& schedule_;
  const MeanFieldTrajectory& mft_;
};

}  // namespace omstirap::detail
