#pragma once

#include <Eigen/Dense>

namespace fdia {

// Sampled minimum-jerk segment between two points. Row i of each matrix is
// the value at time i*Ts; vel and acc are exactly zero on both ends.
struct QuinticPlan {
  Eigen::MatrixXd pos;
  Eigen::MatrixXd vel;
  Eigen::MatrixXd acc;
};

// T is the number of samples including both endpoints, T >= 2.
QuinticPlan quintic_plan(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1,
                         int T, double Ts);

}  // namespace fdia
