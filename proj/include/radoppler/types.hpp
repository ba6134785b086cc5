#pragma once

#include <complex>

#include <Eigen/Core>

namespace radoppler {

using Complex = std::complex<double>;

// Row-major so that rows (frames, range bins) are contiguous and the matrix
// file payload order matches memory order.
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Raw cube samples, fast time × chirp, column-major: one chirp is contiguous.
using SampleMatrix = Eigen::Matrix<std::complex<float>, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

inline constexpr double kSpeedOfLight = 299792458.0;

}  // namespace radoppler
