#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace tensoropt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Largest dimension for which a third-order tensor is stored densely.
inline constexpr Eigen::Index kMaxDenseTensorDim = 100;

}  // namespace tensoropt
