#pragma once

#include "horo/sphere/domain.hpp"

#include <Eigen/Dense>

#include <vector>

namespace horo::sphere {

// Chart angles of a unit vector (north pole = last coordinate).
double polar_angle(const Eigen::VectorXd& x);
double azimuth(const Eigen::VectorXd& x);

// Tensor-product Lagrange interpolation (4 x 4 nodes) of grid samples of a
// scalar function on the sphere. On the radial chart only theta is used.
double interpolate(const SphereDomain& d, const std::vector<double>& f, const Eigen::VectorXd& x);

}  // namespace horo::sphere
