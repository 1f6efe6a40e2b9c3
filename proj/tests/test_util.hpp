#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "omstirap/meanfield.hpp"
#include "omstirap/model.hpp"
#include "omstirap/types.hpp"

namespace testutil {

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

// Baseline transfer scenario with every decay and bath switched off.
inline omstirap::SystemParams decay_free_params() {
  omstirap::SystemParams p;
  p.gamma_L = p.gamma_M = p.gamma_R = 0.0;
  p.gamma_m1 = p.gamma_m2 = 0.0;
  return p;
}

inline omstirap::MeanField real_mean_field(double alpha_l, double alpha_r) {
  omstirap::MeanField mf;
  mf.alpha_L = omstirap::complexd(alpha_l, 0.0);
  mf.alpha_R = omstirap::complexd(alpha_r, 0.0);
  return mf;
}

// Random Hermitian PSD matrix A A^dag with entries of order one.
inline omstirap::Matrix5cd random_psd(std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  omstirap::Matrix5cd a;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      a(i, j) = omstirap::complexd(dist(rng), dist(rng));
  return (a * a.adjoint()) / 5.0;
}

}  // namespace testutil
