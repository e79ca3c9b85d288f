#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qadia {

using Complex = std::complex<double>;

using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using VecX = Eigen::VectorXcd;
using MatX = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;

/// Wrap an angle into (-pi, pi].
double wrap_angle(double phi);

/// Signed difference a - b wrapped into (-pi, pi].
double angle_diff(double a, double b);

}  // namespace qadia
