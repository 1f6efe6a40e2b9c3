#pragma once

#include <complex>

#include <Eigen/Dense>

namespace omstirap {

using complexd = std::complex<double>;

using Matrix3cd = Eigen::Matrix3cd;
using Vector3cd = Eigen::Vector3cd;
using Matrix5cd = Eigen::Matrix<complexd, 5, 5>;
using Vector5cd = Eigen::Matrix<complexd, 5, 1>;
using Vector5d = Eigen::Matrix<double, 5, 1>;

// Fluctuation-mode ordering used by every 5x5 object in the library.
inline constexpr int kModeCavityLeft = 0;
inline constexpr int kModeCavityMiddle = 1;
inline constexpr int kModeCavityRight = 2;
inline constexpr int kModeMembrane1 = 3;
inline constexpr int kModeMembrane2 = 4;

inline constexpr complexd kImag{0.0, 1.0};

}  // namespace omstirap
