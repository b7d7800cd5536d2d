#pragma once

#include <Eigen/Dense>

namespace vxf {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = Mat<double>;
using Vector = Vec<double>;
using Index = Eigen::Index;

}  // namespace vxf
