#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace rescomp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Largest total Hilbert-space dimension any routine accepts.
inline constexpr Index kMaxDimension = 1024;

}  // namespace rescomp
