#pragma once

#include <Eigen/Dense>

namespace fdia {

// Serial chain of revolute joints in the x-y plane. Link i extends from
// joint i along the cumulative angle q_0 + ... + q_i.
struct PlanarChain {
  Eigen::VectorXd lengths;  // metres, all positive
  int dof() const { return static_cast<int>(lengths.size()); }
};

PlanarChain make_chain(const Eigen::VectorXd& lengths);

struct Pose {
  Eigen::Vector3d position;  // z is always 0
  Eigen::Matrix3d rotation;  // rotation about z by the cumulative angle
};

Pose fk(const PlanarChain& chain, const Eigen::VectorXd& q);

// Task-space Jacobian, rows (xdot, ydot, wz). The angular row is all ones.
Eigen::MatrixXd jacobian(const PlanarChain& chain, const Eigen::VectorXd& q);

// Time derivative of the Jacobian at (q, qdot); the angular row is zero.
Eigen::MatrixXd jacobian_dot(const PlanarChain& chain, const Eigen::VectorXd& q,
                             const Eigen::VectorXd& qdot);

// Axis-angle error sin(theta/2) * axis of R_ref * R_est', theta in [0, pi].
// At theta = pi the axis sign is fixed by making its largest-magnitude
// component positive.
Eigen::Vector3d orientation_error(const Eigen::Matrix3d& R_ref,
                                  const Eigen::Matrix3d& R_est);

}  // namespace fdia
