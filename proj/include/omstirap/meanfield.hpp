#pragma once

#include <span>
#include <vector>

#include "omstirap/model.hpp"
#include "omstirap/types.hpp"

namespace omstirap {

// Classical mean-field amplitudes of the three cavity modes and the two
// membranes.
struct MeanField {
  complexd alpha_L{0.0, 0.0};
  complexd alpha_M{0.0, 0.0};
  complexd alpha_R{0.0, 0.0};
  complexd beta_1{0.0, 0.0};
  complexd beta_2{0.0, 0.0};
};

struct DriveTriple {
  complexd left{0.0, 0.0};
  complexd middle{0.0, 0.0};
  complexd right{0.0, 0.0};
};

// Drive values of the schedule at time t (left/right Gaussians plus the
// synthesized middle drive).
DriveTriple drives_at(const SystemParams& params, const PulseSchedule& schedule,
                      double t);

enum class TrajectoryKind { quasi_static, dynamic };

struct MeanFieldTrajectory {
  std::vector<double> t;  // strictly increasing
  std::vector<MeanField> states;
  TrajectoryKind kind = TrajectoryKind::quasi_static;
};

// Solves the coupled cavity steady state as one 3x3 complex linear system
// and back-substitutes the membrane amplitudes. The per-equation residual is
// kept below 1e-12 relative (one refinement pass); a system singular to
// working precision throws SimError(errc::singular_system).
MeanField steady_state(const SystemParams& params, const DriveTriple& drives);

// Instantaneous steady states along the grid. Propagates singular_system
// with the offending time in the message.
MeanFieldTrajectory quasistatic_trajectory(const SystemParams& params,
                                           const PulseSchedule& schedule,
                                           std::span<const double> grid);

// Adaptive integration of the five coupled mean-field ODEs from
// grid.front() to grid.back(), sampled on the grid. Throws
// SimError(errc::step_failure) if the tolerance cannot be met.
MeanFieldTrajectory dynamic_trajectory(const SystemParams& params,
                                       const PulseSchedule& schedule,
                                       std::span<const double> grid,
                                       const MeanField& initial, double rel_tol);

}  // namespace omstirap
