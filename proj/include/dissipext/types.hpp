// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dissipext {

using complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr complex kI{0.0, 1.0};

/// Endpoints of the unit interval.
enum class Endpoint { Left = 0, Right = 1 };

}  // namespace dissipext
