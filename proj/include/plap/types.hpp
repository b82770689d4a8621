#pragma once

#include <Eigen/Dense>

namespace plap {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;
using VectorRef = Eigen::Ref<const Vector>;
using MatrixRef = Eigen::Ref<const Matrix>;

/// Surface area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

}  // namespace plap
