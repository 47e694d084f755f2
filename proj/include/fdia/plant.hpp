#pragma once

#include <Eigen/Dense>

namespace fdia {

// Double-integrator joint plant, discretized at Ts with piecewise-constant
// acceleration input. State is interleaved per joint: [q_0, qd_0, q_1, ...].
struct PlantModel {
  Eigen::MatrixXd A;       // n x n, block diagonal
  Eigen::MatrixXd B;       // n x p
  Eigen::MatrixXd C;       // p x n, selects joint positions
  Eigen::MatrixXd Q;       // process noise covariance, PD
  Eigen::MatrixXd R;       // measurement noise covariance, PD
  Eigen::MatrixXd Q_chol;  // lower Cholesky factors, cached for sampling
  Eigen::MatrixXd R_chol;
  double Ts = 0.0;
  int dof = 0;

  int n() const { return 2 * dof; }
  int p() const { return dof; }
};

// qc scales the continuous-time acceleration noise density (rad^2/s^3);
// r_blk is the per-joint measurement variance (rad^2).
PlantModel make_plant_model(int dof, double Ts, double qc, double r_blk);

Eigen::VectorXd step_plant(const PlantModel& m, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& w);

// y = C x + v + a; the injected offset a rides on the sensor channel.
Eigen::VectorXd measure(const PlantModel& m, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& v, const Eigen::VectorXd& a);

Eigen::VectorXd joint_positions(const Eigen::VectorXd& x);
Eigen::VectorXd joint_velocities(const Eigen::VectorXd& x);
Eigen::VectorXd interleave_state(const Eigen::VectorXd& q, const Eigen::VectorXd& qd);

}  // namespace fdia
