#pragma once

#include <vector>

#include "omstirap/meanfield.hpp"
#include "omstirap/model.hpp"
#include "omstirap/types.hpp"

namespace omstirap {

// Instantaneous 5x5 coupling matrix M of the fluctuation dynamics
// i dF/dt = M F over the mode ordering (da_L, da_M, da_R, db_1, db_2).
// With zero decay and real mean fields M is real symmetric; the diagonal is
// always -i/2 * (gamma_L, gamma_M, gamma_R, gamma_m1, gamma_m2), and the
// (L,R), (L,b2), (R,b1) and (b1,b2) entries vanish identically.
Matrix5cd build_coupling_matrix(const SystemParams& params, const MeanField& mf);

// Diagonal of the diffusion matrix for normal-ordered moments:
// (0, 0, 0, gamma_m1*nbar1, gamma_m2*nbar2). Vacuum optical inputs
// contribute nothing.
Vector5d build_diffusion(const SystemParams& params);

struct MomentTrajectory {
  std::vector<double> t;             // strictly increasing
  std::vector<Matrix5cd> moments;    // N(t), Hermitian PSD
  std::vector<Vector5d> occupancy;   // diagonal of N(t), clamped at zero
};

// Propagates the normal-ordered second moments N_ij = <df_i^dag df_j> along
// the mean-field trajectory's grid by adaptive Runge-Kutta integration of
//   dN/dt = i (conj(M) N - N M^T) + D,
// re-Hermitizing after every accepted step. n0 must be Hermitian PSD
// (within 1e-10). Throws step_failure if the tolerance cannot be met and
// psd_violation if the smallest eigenvalue falls below -1e-6.
MomentTrajectory propagate_moments(const SystemParams& params,
                                   const PulseSchedule& schedule,
                                   const MeanFieldTrajectory& mft,
                                   const Matrix5cd& n0, double rel_tol);

// Independent verification route: piecewise-constant matrix exponentials on
// a uniform subdivision of the window into `steps` intervals, with M sampled
// at each midpoint:
//   N <- conj(E) N E^T + dt * conj(E2) D E2^T,   E2 = exp(-i M dt/2), E = E2^2.
// Converges to propagate_moments at second order. The returned grid has
// steps+1 nodes.
MomentTrajectory propagator_oracle(const SystemParams& params,
                                   const PulseSchedule& schedule,
                                   const MeanFieldTrajectory& mft,
                                   const Matrix5cd& n0, int steps);

// Real diagonal of a moment matrix; entries in [-1e-10, 0) are clamped to
// zero, anything lower throws SimError(errc::negative_occupancy).
Vector5d occupancies(const Matrix5cd& n);

// Final membrane-2 occupancy divided by the initial membrane-1 occupancy.
// Throws SimError(errc::zero_initial) if the latter is zero.
double transfer_efficiency(const MomentTrajectory& trajectory);

}  // namespace omstirap
