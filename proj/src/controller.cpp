#include "fdia/controller.hpp"

#include <stdexcept>

#include "fdia/dare.hpp"

namespace fdia {

TaskGains make_task_gains(double kp, double kd) {
  TaskGains g;
  g.Kpp = kp * Eigen::Matrix3d::Identity();
  g.Kdp = kd * Eigen::Matrix3d::Identity();
  g.Kpo = kp * Eigen::Matrix3d::Identity();
  g.Kdo = kd * Eigen::Matrix3d::Identity();
  return g;
}

std::pair<double, double> lqr_gains(double Ts, double w_pos, double w_vel,
                                    double w_u) {
  if (!(Ts > 0.0)) throw std::invalid_argument("lqr_gains: Ts must be positive");
  if (!(w_pos > 0.0) || !(w_u > 0.0) || w_vel < 0.0) {
    throw std::invalid_argument("lqr_gains: need w_pos > 0, w_u > 0, w_vel >= 0");
  }
  Eigen::MatrixXd A(2, 2), B(2, 1);
  A << 1.0, Ts, 0.0, 1.0;
  B << 0.5 * Ts * Ts, Ts;
  Eigen::MatrixXd Qc = Eigen::Vector2d(w_pos, w_vel).asDiagonal();
  Eigen::MatrixXd Rc(1, 1);
  Rc << w_u;
  // Control Riccati via the estimation-form solver on the transposed data.
  const Eigen::MatrixXd S = solve_dare(A.transpose(), B.transpose(), Qc, Rc);
  const Eigen::MatrixXd K =
      (B.transpose() * S * B + Rc).inverse() * (B.transpose() * S * A);
  const double kp = K(0, 0), kd = K(0, 1);
  if (!jury_stable(kp, kd, Ts, 1.0)) {
    throw std::runtime_error("lqr_gains: designed gains fail the Jury test");
  }
  return {kp, kd};
}

Vector6d task_pd(const TaskRef& ref, const Pose& est_pose,
                 const Eigen::Vector3d& est_vel,
                 const Eigen::Vector3d& est_angvel, const TaskGains& gains) {
  Vector6d u;
  u.head<3>() = ref.acc + gains.Kpp * (ref.pos - est_pose.position) +
                gains.Kdp * (ref.vel - est_vel);
  u.tail<3>() = ref.angacc +
                gains.Kpo * orientation_error(ref.rot, est_pose.rotation) +
                gains.Kdo * (ref.angvel - est_angvel);
  return u;
}

Eigen::VectorXd map_to_joints(const Vector6d& u_task, const PlanarChain& chain,
                              const Eigen::VectorXd& q,
                              const Eigen::VectorXd& qdot, double rank_tol,
                              PinvInfo* info) {
  const Eigen::Vector3d planar(u_task(0), u_task(1), u_task(5));
  const Eigen::MatrixXd J = jacobian(chain, q);
  const Eigen::MatrixXd Jd = jacobian_dot(chain, q, qdot);
  return pinv(J, rank_tol, info) * (planar - Jd * qdot);
}

bool jury_stable(double kp, double kd, double Ts, double fbar) {
  if (!(Ts > 0.0)) throw std::invalid_argument("jury_stable: Ts must be positive");
  if (!(fbar > 0.0 && fbar <= 1.0)) {
    throw std::invalid_argument("jury_stable: fbar must lie in (0, 1]");
  }
  return (fbar * Ts * Ts * kp > 0.0) && (2.0 - fbar * Ts * kd > 0.0) &&
         (kd > 0.5 * Ts * kp);
}

}  // namespace fdia
