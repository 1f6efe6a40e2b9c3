#pragma once

#include <array>
#include <vector>

#include "omstirap/dynamics.hpp"
#include "omstirap/meanfield.hpp"
#include "omstirap/model.hpp"
#include "omstirap/types.hpp"

namespace omstirap {

struct Eigensystem {
  Vector5cd values;
  Matrix5cd vectors;  // unit-norm columns, vectors.col(k) pairs with values(k)
};

// Full complex eigendecomposition of the coupling matrix; uses the Hermitian
// solver when M is Hermitian to working precision. Residuals ||Mv - lambda v||
// are verified below 1e-10; failure throws SimError(errc::no_convergence).
Eigensystem eigensystem(const Matrix5cd& m);

// Closed-form nonzero eigenvalues {l2, l3, l4, l5} with l2 = -l3, l4 = -l5,
// valid for zero decay, alpha_M = 0, real amplitudes and J1 = J2 = 1/2 (the
// closed forms embed 4J^2 = 1). Violations throw
// SimError(errc::precondition_violated).
std::array<complexd, 4> analytic_eigenvalues(const SystemParams& params,
                                             const MeanField& mf);

// Unit-norm zero mode of the decay-free coupling matrix,
//   psi_D ~ (2 g1 g2 aL aR) da_M - (g2 aR) db_1 + (g1 aL) db_2
// at the J = 1/2 normalization, computed numerically as the null vector for
// other J. Requires alpha_M = 0 and real amplitudes. Sign fixed so the db_1
// component is <= 0 when g2 aR >= 0. Throws precondition_violated or
// degenerate_nullspace (null space dimension > 1).
Vector5d dark_mode(const SystemParams& params, const MeanField& mf);

enum class ShiftConvention {
  paper,       // psi_D^T M_decay psi_D with the unnormalized closed-form psi_D
  normalized,  // divided by psi_D^T psi_D (first-order perturbation theory)
};

// First-order decay-induced shift of the zero eigenvalue. The paper
// convention requires the J = 1/2 normalization; the normalized convention
// works wherever dark_mode does.
complexd decay_shift(const SystemParams& params, const MeanField& mf,
                     ShiftConvention convention);

struct SpectralSnapshot {
  double t = 0.0;
  Vector5cd eigenvalues;   // branch-tracked ordering, consistent across time
  Matrix5cd eigenvectors;  // unit norm, column k pairs with eigenvalues(k)
  int dark_index = 0;      // branch continuously connected to the zero mode
  double gap = 0.0;        // min |Re l_dark - Re l_other|
  complexd decay_shift{0.0, 0.0};
  bool ambiguous = false;  // two branches within 1e-10 at this point
};

struct SpectralTrajectory {
  std::vector<SpectralSnapshot> snapshots;
};

// Branch-tracked eigenvalue curves along the trajectory. Branches are
// matched between consecutive points by the minimal-total-displacement
// assignment; if the per-step eigenvalue motion exceeds half the local gap
// the internal grid is refined once before flagging points ambiguous. The
// dark branch is the one nearest zero at the first grid point. Per-point
// decay shifts are evaluated from the decay-free closed-form mean field so
// they remain defined for any configured decay rates.
SpectralTrajectory spectral_trajectory(
    const SystemParams& params, const PulseSchedule& schedule,
    const MeanFieldTrajectory& mft,
    ShiftConvention convention = ShiftConvention::paper);

struct ThreeLevelDark {
  Eigen::Vector3d state;  // unit norm, components on (|1>, |2>, |3>)
  double eigenvalue = 0.0;
};

// Reference oracle for the three-level Raman system: at two-photon resonance
// returns the exact dark state ~ (Omega_S, 0, -Omega_P) with eigenvalue 0;
// off resonance, the eigenpair continuously connected to it. Throws
// SimError(errc::zero_fields) when both field amplitudes vanish.
ThreeLevelDark three_level_dark_state(double omega_p, double omega_s,
                                      double delta_p, double delta_s);

}  // namespace omstirap
