#include "omstirap/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "omstirap/detail/meanfield_source.hpp"
#include "omstirap/errors.hpp"

namespace omstirap {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kNullTol = 1e-10;
constexpr double kDegeneracyTol = 1e-10;  // branch-ambiguity threshold
constexpr double kGapFloor = 1e-8;        // below this, branches count as one cluster

void check_dark_preconditions(const MeanField& mf) {
  const double scale = 1.0 + std::abs(mf.alpha_L) + std::abs(mf.alpha_R);
  if (std::abs(mf.alpha_M) > 1e-9 * scale)
    throw SimError(errc::precondition_violated,
                   "dark mode requires alpha_M = 0");
  if (std::abs(mf.alpha_L.imag()) > 1e-9 * scale ||
      std::abs(mf.alpha_R.imag()) > 1e-9 * scale)
    throw SimError(errc::precondition_violated,
                   "dark mode requires real cavity amplitudes");
}

bool half_tunneling(const SystemParams& p) {
  return std::abs(p.j1 - 0.5) <= 1e-12 && std::abs(p.j2 - 0.5) <= 1e-12;
}

const std::vector<std::array<int, 5>>& all_permutations() {
  static const std::vector<std::array<int, 5>> perms = [] {
    std::vector<std::array<int, 5>> out;
    std::array<int, 5> idx{0, 1, 2, 3, 4};
    do {
      out.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
  }();
  return perms;
}

// Decay-free closed-form mean field (alpha = Omega/(-delta'), alpha_M = 0).
MeanField free_mean_field(const SystemParams& p, const PulseSchedule& s,
                          double t) {
  if (p.delta_L == 0.0 || p.delta_R == 0.0)
    throw SimError(errc::zero_detuning,
                   "closed-form mean field requires nonzero detunings");
  MeanField mf;
  mf.alpha_L = complexd(pulse_left(s, t) / (-p.delta_L), 0.0);
  mf.alpha_R = complexd(pulse_right(s, t) / (-p.delta_R), 0.0);
  return mf;
}

}  // namespace

Eigensystem eigensystem(const Matrix5cd& m) {
  if (!m.allFinite())
    throw std::invalid_argument("coupling matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());

  Eigensystem out;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-13 * scale) {
    Eigen::SelfAdjointEigenSolver<Matrix5cd> solver(m);
    if (solver.info() != Eigen::Success)
      throw SimError(errc::no_convergence, "Hermitian eigensolver failed");
    out.values = solver.eigenvalues().cast<complexd>();
    out.vectors = solver.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<Matrix5cd> solver(m);
    if (solver.info() != Eigen::Success)
      throw SimError(errc::no_convergence, "complex eigensolver failed");
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
  }

  for (int k = 0; k < 5; ++k) {
    out.vectors.col(k).normalize();
    const double residual =
        (m * out.vectors.col(k) - out.values(k) * out.vectors.col(k)).norm();
    if (residual > kResidualTol * scale)
      throw SimError(errc::no_convergence,
                     "eigenpair residual " + std::to_string(residual));
  }
  return out;
}

std::array<complexd, 4> analytic_eigenvalues(const SystemParams& p,
                                             const MeanField& mf) {
  const double max_gamma =
      std::max({std::abs(p.gamma_L), std::abs(p.gamma_M), std::abs(p.gamma_R),
                std::abs(p.gamma_m1), std::abs(p.gamma_m2)});
  if (max_gamma > 1e-14)
    throw SimError(errc::precondition_violated,
                   "closed-form eigenvalues require zero decay");
  if (!half_tunneling(p))
    throw SimError(errc::precondition_violated,
                   "closed-form eigenvalues require J1 = J2 = 1/2");
  check_dark_preconditions(mf);

  const double x1 = p.g1 * mf.alpha_L.real();
  const double x2 = p.g2 * mf.alpha_R.real();
  const double a0 = 1.0 + 2.0 * x1 * x1 + 2.0 * x2 * x2;
  const double b0 = 1.0 + 4.0 * std::pow(x1, 4) - 8.0 * x1 * x1 * x2 * x2 +
                    4.0 * std::pow(x2, 4);
  const double root = std::sqrt(std::max(b0, 0.0));
  const double l2 = -0.5 * std::sqrt(std::max(a0 - root, 0.0));
  const double l4 = -0.5 * std::sqrt(a0 + root);
  return {complexd(l2, 0.0), complexd(-l2, 0.0), complexd(l4, 0.0),
          complexd(-l4, 0.0)};
}

Vector5d dark_mode(const SystemParams& p, const MeanField& mf) {
  check_dark_preconditions(mf);
  const double a_l = mf.alpha_L.real();
  const double a_r = mf.alpha_R.real();
  const double comp_b1 = -p.g2 * a_r;
  const double comp_b2 = p.g1 * a_l;

  Vector5d v = Vector5d::Zero();
  if (half_tunneling(p)) {
    v(kModeCavityMiddle) = 2.0 * p.g1 * p.g2 * a_l * a_r;
    v(kModeMembrane1) = comp_b1;
    v(kModeMembrane2) = comp_b2;
    if (v.norm() < 1e-150)
      throw SimError(errc::degenerate_nullspace,
                     "both couplings vanish; the null space is degenerate");
  } else {
    SystemParams free = p;
    free.gamma_L = free.gamma_M = free.gamma_R = 0.0;
    free.gamma_m1 = free.gamma_m2 = 0.0;
    MeanField real_mf = mf;
    real_mf.alpha_L = complexd(a_l, 0.0);
    real_mf.alpha_M = complexd(0.0, 0.0);
    real_mf.alpha_R = complexd(a_r, 0.0);
    const Matrix5cd m = build_coupling_matrix(free, real_mf);
    const Eigensystem es = eigensystem(m);

    std::array<int, 5> order{0, 1, 2, 3, 4};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(es.values(a)) < std::abs(es.values(b));
    });
    if (std::abs(es.values(order[0])) > kNullTol)
      throw SimError(errc::precondition_violated,
                     "decay-free coupling matrix has no zero mode");
    if (std::abs(es.values(order[1])) <= kNullTol)
      throw SimError(errc::degenerate_nullspace,
                     "null space dimension exceeds one at this point");
    v = es.vectors.col(order[0]).real();
  }

  v.normalize();
  // The db_1 component is <= 0 whenever g2*alpha_R >= 0.
  if (comp_b1 != 0.0) {
    if (v(kModeMembrane1) * comp_b1 < 0.0) v = -v;
  } else if (comp_b2 != 0.0) {
    if (v(kModeMembrane2) * comp_b2 < 0.0) v = -v;
  }
  return v;
}

complexd decay_shift(const SystemParams& p, const MeanField& mf,
                     ShiftConvention convention) {
  if (convention == ShiftConvention::paper) {
    if (!half_tunneling(p))
      throw SimError(errc::precondition_violated,
                     "the unnormalized shift requires J1 = J2 = 1/2");
    check_dark_preconditions(mf);
    const double a_l = mf.alpha_L.real();
    const double a_r = mf.alpha_R.real();
    const double m_comp = p.g1 * p.g2 * a_l * a_r;
    return -kImag * (2.0 * p.gamma_M * m_comp * m_comp +
                     0.5 * p.gamma_m1 * std::pow(p.g2 * a_r, 2) +
                     0.5 * p.gamma_m2 * std::pow(p.g1 * a_l, 2));
  }
  const Vector5d v = dark_mode(p, mf);
  const double gammas[5] = {p.gamma_L, p.gamma_M, p.gamma_R, p.gamma_m1,
                            p.gamma_m2};
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) sum += 0.5 * gammas[i] * v(i) * v(i);
  return -kImag * sum;
}

namespace {

struct TrackedNode {
  double t;
  Vector5cd values;   // branch order
  Matrix5cd vectors;  // columns in branch order
  bool ambiguous = false;
  bool original = false;
  std::size_t original_index = 0;
};

struct TrackingOutcome {
  std::vector<TrackedNode> nodes;
  double worst_ratio = 0.0;  // max of motion / (gap/2) over all steps
};

TrackingOutcome track(const SystemParams& params,
                      const std::vector<double>& times,
                      const std::vector<MeanField>& fields,
                      const std::vector<bool>& original,
                      const std::vector<std::size_t>& original_index) {
  TrackingOutcome out;
  out.nodes.reserve(times.size());

  Vector5cd prev;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Eigensystem es =
        eigensystem(build_coupling_matrix(params, fields[i]));
    TrackedNode node;
    node.t = times[i];
    node.original = original[i];
    node.original_index = original_index[i];

    std::array<int, 5> best{0, 1, 2, 3, 4};
    bool tie = false;
    if (i == 0) {
      node.values = es.values;
      node.vectors = es.vectors;
    } else {
      double best_cost = std::numeric_limits<double>::infinity();
      for (const auto& perm : all_permutations()) {
        double cost = 0.0;
        for (int k = 0; k < 5; ++k) cost += std::abs(es.values(perm[k]) - prev(k));
        if (cost < best_cost - 1e-13) {
          best_cost = cost;
          best = perm;
          tie = false;
        } else if (cost <= best_cost + 1e-13) {
          tie = true;
        }
      }
      for (int k = 0; k < 5; ++k) {
        node.values(k) = es.values(best[k]);
        node.vectors.col(k) = es.vectors.col(best[k]);
      }
    }

    // Degeneracy makes the assignment non-unique.
    double min_pair = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b)
        min_pair = std::min(min_pair, std::abs(node.values(a) - node.values(b)));
    node.ambiguous = tie && min_pair <= kDegeneracyTol;

    if (i > 0) {
      double motion = 0.0;
      for (int k = 0; k < 5; ++k)
        motion = std::max(motion, std::abs(node.values(k) - prev(k)));
      double gap = std::numeric_limits<double>::infinity();
      for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b) {
          const double d = std::abs(node.values(a) - node.values(b));
          if (d > kGapFloor) gap = std::min(gap, d);
        }
      if (std::isfinite(gap) && gap > 0.0)
        out.worst_ratio = std::max(out.worst_ratio, motion / (0.5 * gap));
    }

    prev = node.values;
    out.nodes.push_back(std::move(node));
  }
  return out;
}

}  // namespace

SpectralTrajectory spectral_trajectory(const SystemParams& params,
                                       const PulseSchedule& schedule,
                                       const MeanFieldTrajectory& mft,
                                       ShiftConvention convention) {
  if (mft.t.empty()) throw std::invalid_argument("empty mean-field trajectory");

  const detail::MeanFieldSource source(params, schedule, mft);

  std::vector<double> times(mft.t.begin(), mft.t.end());
  std::vector<MeanField> fields(mft.states.begin(), mft.states.end());
  std::vector<bool> original(times.size(), true);
  std::vector<std::size_t> original_index(times.size());
  std::iota(original_index.begin(), original_index.end(), 0);

  TrackingOutcome outcome =
      track(params, times, fields, original, original_index);

  // One automatic refinement when branch motion outruns the local gap.
  if (outcome.worst_ratio >= 1.0 && times.size() > 1) {
    const int extra = static_cast<int>(std::min(
        16.0, std::max(2.0, std::ceil(2.0 * outcome.worst_ratio))));
    std::vector<double> rt;
    std::vector<MeanField> rf;
    std::vector<bool> ro;
    std::vector<std::size_t> ri;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      rt.push_back(times[i]);
      rf.push_back(fields[i]);
      ro.push_back(true);
      ri.push_back(i);
      for (int k = 1; k <= extra; ++k) {
        const double t =
            times[i] + (times[i + 1] - times[i]) * k / (extra + 1.0);
        rt.push_back(t);
        rf.push_back(source.at(t));
        ro.push_back(false);
        ri.push_back(0);
      }
    }
    rt.push_back(times.back());
    rf.push_back(fields.back());
    ro.push_back(true);
    ri.push_back(times.size() - 1);
    outcome = track(params, rt, rf, ro, ri);
  }

  // Dark branch: continuously connected to the eigenvalue nearest zero at
  // the start.
  int dark = 0;
  {
    const Vector5cd& first = outcome.nodes.front().values;
    double best = std::abs(first(0));
    for (int k = 1; k < 5; ++k) {
      if (std::abs(first(k)) < best) {
        best = std::abs(first(k));
        dark = k;
      }
    }
  }

  SpectralTrajectory traj;
  traj.snapshots.reserve(mft.t.size());
  for (const TrackedNode& node : outcome.nodes) {
    if (!node.original) continue;
    SpectralSnapshot snap;
    snap.t = node.t;
    snap.eigenvalues = node.values;
    snap.eigenvectors = node.vectors;
    snap.dark_index = dark;
    snap.ambiguous = node.ambiguous;
    double gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 5; ++k) {
      if (k == dark) continue;
      gap = std::min(gap,
                     std::abs(node.values(k).real() - node.values(dark).real()));
    }
    snap.gap = gap;
    snap.decay_shift =
        decay_shift(params, free_mean_field(params, schedule, node.t), convention);
    traj.snapshots.push_back(std::move(snap));
  }
  return traj;
}

ThreeLevelDark three_level_dark_state(double omega_p, double omega_s,
                                      double delta_p, double delta_s) {
  if (omega_p == 0.0 && omega_s == 0.0)
    throw SimError(errc::zero_fields, "both field amplitudes are zero");

  Eigen::Vector3d resonant(omega_s, 0.0, -omega_p);
  resonant.normalize();
  if (delta_p == delta_s) return {resonant, 0.0};

  Eigen::Matrix3d h;
  h << 0.0, omega_p, 0.0,
      omega_p, 2.0 * delta_p, omega_s,
      0.0, omega_s, 2.0 * (delta_p - delta_s);
  h *= 0.5;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(h);
  if (solver.info() != Eigen::Success)
    throw SimError(errc::no_convergence, "three-level eigensolver failed");

  int best = 0;
  double overlap = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double o = std::abs(resonant.dot(solver.eigenvectors().col(k)));
    if (o > overlap) {
      overlap = o;
      best = k;
    }
  }
  Eigen::Vector3d state = solver.eigenvectors().col(best);
  if (resonant.dot(state) < 0.0) state = -state;
  return {state, solver.eigenvalues()(best)};
}

}  // namespace omstirap
