#pragma once

#include <Eigen/Dense>

#include "fdia/chain.hpp"
#include "fdia/pinv.hpp"

namespace fdia {

using Vector6d = Eigen::Matrix<double, 6, 1>;

// Full task-space reference; the planar scenario holds z, roll and pitch
// identically zero.
struct TaskRef {
  Eigen::Vector3d pos = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  Eigen::Vector3d vel = Eigen::Vector3d::Zero();
  Eigen::Vector3d angvel = Eigen::Vector3d::Zero();
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  Eigen::Vector3d angacc = Eigen::Vector3d::Zero();
};

struct TaskGains {
  Eigen::Matrix3d Kpp, Kdp, Kpo, Kdo;
};

TaskGains make_task_gains(double kp, double kd);

// Discrete LQR of the per-joint double integrator with stage cost
// diag(w_pos, w_vel) on the state and w_u on the input. Returns (kp, kd).
std::pair<double, double> lqr_gains(double Ts, double w_pos, double w_vel,
                                    double w_u);

// PD + feedforward task acceleration (6 rows: linear xyz, angular xyz).
Vector6d task_pd(const TaskRef& ref, const Pose& est_pose,
                 const Eigen::Vector3d& est_vel,
                 const Eigen::Vector3d& est_angvel, const TaskGains& gains);

// Projects the planar rows (xdd, ydd, wzd) through the Jacobian pseudoinverse:
// u = J^+ (u_task - Jdot qdot). Near-singular J is reported through info,
// never fatal.
Eigen::VectorXd map_to_joints(const Vector6d& u_task, const PlanarChain& chain,
                              const Eigen::VectorXd& q,
                              const Eigen::VectorXd& qdot, double rank_tol,
                              PinvInfo* info = nullptr);

// Schur stability of the scaled joint loop A - fbar B [kp kd] by the Jury
// conditions; exact up to rounding, fbar in (0, 1].
bool jury_stable(double kp, double kd, double Ts, double fbar);

}  // namespace fdia
