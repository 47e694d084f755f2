#include "fdia/kalman.hpp"

#include <stdexcept>

namespace fdia {

KalmanGainSet kf_design(const PlantModel& m, const DareOptions& opt) {
  KalmanGainSet g;
  g.P = solve_dare(m.A, m.C, m.Q, m.R, opt);
  g.Sigma = m.C * g.P * m.C.transpose() + m.R;
  g.Sigma_llt.compute(g.Sigma);
  if (g.Sigma_llt.info() != Eigen::Success) {
    throw std::runtime_error("kf_design: innovation covariance not PD");
  }
  g.L = m.A * g.P * m.C.transpose() * g.Sigma_llt.solve(
            Eigen::MatrixXd::Identity(m.p(), m.p()));
  const Eigen::MatrixXd Acl = m.A - g.L * m.C;
  g.rho_closed = Acl.eigenvalues().cwiseAbs().maxCoeff();
  if (!(g.rho_closed < 1.0)) {
    throw std::runtime_error("kf_design: filter closed loop is not Schur");
  }
  return g;
}

KfStep kf_step(const EstimatorState& s, const KalmanGainSet& gains,
               const PlantModel& m, const Eigen::VectorXd& u,
               const Eigen::VectorXd& y_tilde) {
  if (s.xhat.size() != m.n() || u.size() != m.p() || y_tilde.size() != m.p()) {
    throw std::invalid_argument("kf_step: dimension mismatch");
  }
  KfStep out;
  out.innovation = y_tilde - m.C * s.xhat;
  out.state.xhat = m.A * s.xhat + m.B * u + gains.L * out.innovation;
  return out;
}

}  // namespace fdia
