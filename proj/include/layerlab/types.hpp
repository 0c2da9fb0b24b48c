#pragma once

#include <complex>

#include <Eigen/Dense>

namespace layerlab {

using cplx = std::complex<double>;

// Points live in R^3; planar problems keep the third coordinate at zero.
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace layerlab
