#include "fdia/plant.hpp"

#include <stdexcept>

namespace fdia {

PlantModel make_plant_model(int dof, double Ts, double qc, double r_blk) {
  if (dof < 1) throw std::invalid_argument("make_plant_model: dof must be >= 1");
  if (!(Ts > 0.0)) throw std::invalid_argument("make_plant_model: Ts must be positive");
  if (!(qc > 0.0)) throw std::invalid_argument("make_plant_model: qc must be positive");
  if (!(r_blk > 0.0)) throw std::invalid_argument("make_plant_model: r_blk must be positive");

  PlantModel m;
  m.Ts = Ts;
  m.dof = dof;
  const int n = 2 * dof;
  m.A = Eigen::MatrixXd::Zero(n, n);
  m.B = Eigen::MatrixXd::Zero(n, dof);
  m.C = Eigen::MatrixXd::Zero(dof, n);
  m.Q = Eigen::MatrixXd::Zero(n, n);
  m.R = r_blk * Eigen::MatrixXd::Identity(dof, dof);

  Eigen::Matrix2d Aj;
  Aj << 1.0, Ts, 0.0, 1.0;
  Eigen::Vector2d Bj(0.5 * Ts * Ts, Ts);
  Eigen::Matrix2d Qj;
  Qj << Ts * Ts * Ts / 3.0, Ts * Ts / 2.0, Ts * Ts / 2.0, Ts;
  Qj *= qc;

  for (int j = 0; j < dof; ++j) {
    m.A.block<2, 2>(2 * j, 2 * j) = Aj;
    m.B.block<2, 1>(2 * j, j) = Bj;
    m.C(j, 2 * j) = 1.0;
    m.Q.block<2, 2>(2 * j, 2 * j) = Qj;
  }
  m.Q_chol = Eigen::LLT<Eigen::MatrixXd>(m.Q).matrixL();
  m.R_chol = Eigen::LLT<Eigen::MatrixXd>(m.R).matrixL();
  return m;
}

Eigen::VectorXd step_plant(const PlantModel& m, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  if (x.size() != m.n() || u.size() != m.p() || w.size() != m.n()) {
    throw std::invalid_argument("step_plant: dimension mismatch");
  }
  return m.A * x + m.B * u + w;
}

Eigen::VectorXd measure(const PlantModel& m, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& v, const Eigen::VectorXd& a) {
  if (x.size() != m.n() || v.size() != m.p() || a.size() != m.p()) {
    throw std::invalid_argument("measure: dimension mismatch");
  }
  return m.C * x + v + a;
}

Eigen::VectorXd joint_positions(const Eigen::VectorXd& x) {
  const Eigen::Index p = x.size() / 2;
  Eigen::VectorXd q(p);
  for (Eigen::Index j = 0; j < p; ++j) q(j) = x(2 * j);
  return q;
}

Eigen::VectorXd joint_velocities(const Eigen::VectorXd& x) {
  const Eigen::Index p = x.size() / 2;
  Eigen::VectorXd qd(p);
  for (Eigen::Index j = 0; j < p; ++j) qd(j) = x(2 * j + 1);
  return qd;
}

Eigen::VectorXd interleave_state(const Eigen::VectorXd& q, const Eigen::VectorXd& qd) {
  if (q.size() != qd.size()) {
    throw std::invalid_argument("interleave_state: size mismatch");
  }
  Eigen::VectorXd x(2 * q.size());
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    x(2 * j) = q(j);
    x(2 * j + 1) = qd(j);
  }
  return x;
}

}  // namespace fdia
