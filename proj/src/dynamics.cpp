#include "omstirap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "omstirap/detail/meanfield_source.hpp"
#include "omstirap/detail/ode.hpp"
#include "omstirap/errors.hpp"

namespace omstirap {

namespace {

using detail::MeanFieldSource;

constexpr double kHermitianTol = 1e-10;
constexpr double kPsdFloor = -1e-10;
constexpr double kPsdBlowup = -1e-6;

double min_eigenvalue(const Matrix5cd& n) {
  Eigen::SelfAdjointEigenSolver<Matrix5cd> es(n, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void check_initial_moments(const Matrix5cd& n0) {
  if (!n0.allFinite())
    throw std::invalid_argument("initial moment matrix has non-finite entries");
  const double scale = std::max(1.0, n0.cwiseAbs().maxCoeff());
  if ((n0 - n0.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale)
    throw std::invalid_argument("initial moment matrix is not Hermitian");
  if (min_eigenvalue(0.5 * (n0 + n0.adjoint())) < kPsdFloor * scale)
    throw std::invalid_argument("initial moment matrix is not PSD");
}

}  // namespace

Matrix5cd build_coupling_matrix(const SystemParams& p, const MeanField& mf) {
  const complexd aL = mf.alpha_L, aM = mf.alpha_M, aR = mf.alpha_R;
  Matrix5cd m = Matrix5cd::Zero();
  m(0, 0) = -kImag * 0.5 * p.gamma_L;
  m(1, 1) = -kImag * 0.5 * p.gamma_M;
  m(2, 2) = -kImag * 0.5 * p.gamma_R;
  m(3, 3) = -kImag * 0.5 * p.gamma_m1;
  m(4, 4) = -kImag * 0.5 * p.gamma_m2;
  m(0, 1) = m(1, 0) = -p.j1;
  m(1, 2) = m(2, 1) = -p.j2;
  m(0, 3) = m(3, 0) = -p.g1 * aL;
  m(1, 3) = m(3, 1) = p.g1 * aM;
  m(1, 4) = m(4, 1) = -p.g2 * aM;
  m(2, 4) = m(4, 2) = p.g2 * aR;
  return m;
}

Vector5d build_diffusion(const SystemParams& p) {
  Vector5d d = Vector5d::Zero();
  d(3) = p.gamma_m1 * p.nbar1;
  d(4) = p.gamma_m2 * p.nbar2;
  return d;
}

MomentTrajectory propagate_moments(const SystemParams& params,
                                   const PulseSchedule& schedule,
                                   const MeanFieldTrajectory& mft,
                                   const Matrix5cd& n0, double rel_tol) {
  if (mft.t.size() < 2)
    throw std::invalid_argument("mean-field trajectory needs at least two points");
  check_initial_moments(n0);

  const MeanFieldSource source(params, schedule, mft);
  const Matrix5cd diffusion = build_diffusion(params).cast<complexd>().asDiagonal();

  auto rhs = [&](double t, const Matrix5cd& n, Matrix5cd& dn) {
    const Matrix5cd m = build_coupling_matrix(params, source.at(t));
    dn = kImag * (m.conjugate() * n - n * m.transpose());
    dn += diffusion;
  };

  auto rehermitize = [&](Matrix5cd& n) {
    n = (0.5 * (n + n.adjoint())).eval();
    const double scale = std::max(1.0, n.cwiseAbs().maxCoeff());
    if (min_eigenvalue(n) < kPsdBlowup * scale)
      throw SimError(errc::psd_violation,
                     "moment matrix lost positivity; integration blow-up");
  };

  MomentTrajectory traj;
  traj.t = mft.t;
  traj.moments.reserve(mft.t.size());
  traj.occupancy.reserve(mft.t.size());

  Matrix5cd start = 0.5 * (n0 + n0.adjoint());
  detail::integrate_dopri5(
      rhs, start, mft.t.front(), mft.t.back(), mft.t, rel_tol, 1e-14,
      [&](double, const Matrix5cd& n) {
        traj.moments.push_back(n);
        traj.occupancy.push_back(occupancies(n));
      },
      rehermitize);
  return traj;
}

MomentTrajectory propagator_oracle(const SystemParams& params,
                                   const PulseSchedule& schedule,
                                   const MeanFieldTrajectory& mft,
                                   const Matrix5cd& n0, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (mft.t.size() < 2)
    throw std::invalid_argument("mean-field trajectory needs at least two points");
  check_initial_moments(n0);

  const MeanFieldSource source(params, schedule, mft);
  const Matrix5cd diffusion = build_diffusion(params).cast<complexd>().asDiagonal();
  const double t0 = mft.t.front();
  const double t1 = mft.t.back();
  const double dt = (t1 - t0) / steps;

  MomentTrajectory traj;
  traj.t.reserve(steps + 1);
  traj.moments.reserve(steps + 1);
  traj.occupancy.reserve(steps + 1);

  Matrix5cd n = 0.5 * (n0 + n0.adjoint());
  traj.t.push_back(t0);
  traj.moments.push_back(n);
  traj.occupancy.push_back(occupancies(n));

  for (int k = 0; k < steps; ++k) {
    const double tm = t0 + (k + 0.5) * dt;
    const Matrix5cd m = build_coupling_matrix(params, source.at(tm));
    const Matrix5cd half = (-kImag * 0.5 * dt * m).exp();
    const Matrix5cd full = half * half;
    n = full.conjugate() * n * full.transpose() +
        dt * (half.conjugate() * diffusion * half.transpose());
    n = 0.5 * (n + n.adjoint());
    if (!n.allFinite())
      throw SimError(errc::overflow, "oracle propagation overflowed at t = " +
                                         std::to_string(t0 + (k + 1) * dt));
    traj.t.push_back(k + 1 == steps ? t1 : t0 + (k + 1) * dt);
    traj.moments.push_back(n);
    traj.occupancy.push_back(occupancies(n));
  }
  return traj;
}

Vector5d occupancies(const Matrix5cd& n) {
  Vector5d occ;
  for (int i = 0; i < 5; ++i) {
    const double v = n(i, i).real();
    if (v < kPsdFloor)
      throw SimError(errc::negative_occupancy,
                     "diagonal entry " + std::to_string(i) + " = " +
                         std::to_string(v) + " below the clamp threshold");
    occ(i) = std::max(v, 0.0);
  }
  return occ;
}

double transfer_efficiency(const MomentTrajectory& trajectory) {
  if (trajectory.occupancy.empty())
    throw std::invalid_argument("empty moment trajectory");
  const double initial = trajectory.occupancy.front()(kModeMembrane1);
  if (initial <= 0.0)
    throw SimError(errc::zero_initial,
                   "initial membrane-1 occupancy must be positive");
  return trajectory.occupancy.back()(kModeMembrane2) / initial;
}

}  // namespace omstirap
