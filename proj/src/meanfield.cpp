#include "omstirap/meanfield.hpp"

#include <cmath>
#include <string>

#include "omstirap/detail/ode.hpp"
#include "omstirap/errors.hpp"

namespace omstirap {

namespace {

Matrix3cd cavity_system(const SystemParams& p) {
  Matrix3cd a;
  a << complexd(-p.delta_L, 0.5 * p.gamma_L), complexd(p.j1, 0.0), complexd(0.0, 0.0),
      complexd(p.j1, 0.0), complexd(-p.delta_M, 0.5 * p.gamma_M), complexd(p.j2, 0.0),
      complexd(0.0, 0.0), complexd(p.j2, 0.0), complexd(-p.delta_R, 0.5 * p.gamma_R);
  return a;
}

// Membrane amplitudes from the cavity intensities, d(beta)/dt = 0.
void membrane_steady(const SystemParams& p, MeanField& mf) {
  const double i_L = std::norm(mf.alpha_L);
  const double i_M = std::norm(mf.alpha_M);
  const double i_R = std::norm(mf.alpha_R);
  const complexd den1(0.5 * p.gamma_m1, p.omega_m1);
  const complexd den2(0.5 * p.gamma_m2, p.omega_m2);
  if (den1 == complexd(0.0, 0.0) || den2 == complexd(0.0, 0.0))
    throw SimError(errc::singular_system, "membrane response is singular");
  mf.beta_1 = kImag * p.g1 * (i_L - i_M) / den1;
  mf.beta_2 = -kImag * p.g2 * (i_R - i_M) / den2;
}

}  // namespace

DriveTriple drives_at(const SystemParams& p, const PulseSchedule& s, double t) {
  return DriveTriple{complexd(pulse_left(s, t), 0.0),
                     complexd(pulse_middle(p, s, t), 0.0),
                     complexd(pulse_right(s, t), 0.0)};
}

MeanField steady_state(const SystemParams& p, const DriveTriple& drives) {
  const Matrix3cd a = cavity_system(p);
  const Vector3cd rhs(drives.left, drives.middle, drives.right);

  Eigen::FullPivLU<Matrix3cd> lu(a);
  if (!lu.isInvertible())
    throw SimError(errc::singular_system, "cavity steady-state system is singular");

  Vector3cd x = lu.solve(rhs);
  x += lu.solve(rhs - a * x);  // one refinement pass

  const Vector3cd residual = rhs - a * x;
  const Eigen::Vector3d scale =
      a.cwiseAbs() * x.cwiseAbs() + rhs.cwiseAbs();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(residual(i)) > 1e-12 * std::max(scale(i), 1e-300))
      throw SimError(errc::singular_system,
                     "cavity steady state is singular to working precision");
  }

  MeanField mf;
  mf.alpha_L = x(0);
  mf.alpha_M = x(1);
  mf.alpha_R = x(2);
  membrane_steady(p, mf);
  return mf;
}

MeanFieldTrajectory quasistatic_trajectory(const SystemParams& p,
                                           const PulseSchedule& s,
                                           std::span<const double> grid) {
  MeanFieldTrajectory traj;
  traj.kind = TrajectoryKind::quasi_static;
  traj.t.assign(grid.begin(), grid.end());
  traj.states.reserve(grid.size());
  for (double t : grid) {
    try {
      traj.states.push_back(steady_state(p, drives_at(p, s, t)));
    } catch (const SimError& e) {
      if (e.code() == errc::singular_system)
        throw SimError(errc::singular_system,
                       "at t = " + std::to_string(t) + ": " + e.what());
      throw;
    }
  }
  return traj;
}

MeanFieldTrajectory dynamic_trajectory(const SystemParams& p,
                                       const PulseSchedule& s,
                                       std::span<const double> grid,
                                       const MeanField& initial,
                                       double rel_tol) {
  if (!(rel_tol > 0.0))
    throw SimError(errc::step_failure, "tolerance must be positive");
  if (grid.size() < 2)
    throw SimError(errc::step_failure, "grid needs at least two points");

  auto rhs = [&](double t, const Vector5cd& y, Vector5cd& dy) {
    const double om_L = pulse_left(s, t);
    const double om_R = pulse_right(s, t);
    const double om_M = pulse_middle(p, s, t);
    const complexd aL = y(0), aM = y(1), aR = y(2), b1 = y(3), b2 = y(4);
    dy(0) = -complexd(0.5 * p.gamma_L, p.delta_L) * aL + kImag * p.j1 * aM -
            kImag * om_L;
    dy(1) = -complexd(0.5 * p.gamma_M, p.delta_M) * aM + kImag * p.j1 * aL +
            kImag * p.j2 * aR - kImag * om_M;
    dy(2) = -complexd(0.5 * p.gamma_R, p.delta_R) * aR + kImag * p.j2 * aM -
            kImag * om_R;
    dy(3) = -complexd(0.5 * p.gamma_m1, p.omega_m1) * b1 +
            kImag * p.g1 * (std::norm(aL) - std::norm(aM));
    dy(4) = -complexd(0.5 * p.gamma_m2, p.omega_m2) * b2 -
            kImag * p.g2 * (std::norm(aR) - std::norm(aM));
  };

  Vector5cd y0;
  y0 << initial.alpha_L, initial.alpha_M, initial.alpha_R, initial.beta_1,
      initial.beta_2;

  MeanFieldTrajectory traj;
  traj.kind = TrajectoryKind::dynamic;
  traj.t.assign(grid.begin(), grid.end());
  traj.states.reserve(grid.size());

  detail::integrate_dopri5(
      rhs, y0, grid.front(), grid.back(), grid, rel_tol, 1e-14,
      [&](double, const Vector5cd& y) {
        traj.states.push_back(MeanField{y(0), y(1), y(2), y(3), y(4)});
      },
      [](Vector5cd&) {});
  return traj;
}

}  // namespace omstirap
