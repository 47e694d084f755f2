#include "fdia/defence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fdia/gamma.hpp"

namespace fdia {

PredictorState make_predictor(const Eigen::VectorXd& xhat,
                              const KalmanGainSet& gains, int sync_period) {
  if (sync_period < 1) {
    throw std::invalid_argument("make_predictor: sync_period must be >= 1");
  }
  PredictorState s;
  s.sync_period = sync_period;
  resync(s, xhat, gains);
  return s;
}

void resync(PredictorState& s, const Eigen::VectorXd& xhat,
            const KalmanGainSet& gains) {
  const Eigen::Index n = xhat.size();
  s.xtilde = xhat;
  s.Pz = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  s.Pz.topLeftCorner(n, n) = gains.P;
  s.steps_since_sync = 0;
}

void predictor_step(PredictorState& s, const PlantModel& m,
                    const Eigen::VectorXd& u) {
  if (s.xtilde.size() != m.n() || u.size() != m.p()) {
    throw std::invalid_argument("predictor_step: dimension mismatch");
  }
  s.xtilde = m.A * s.xtilde + m.B * u;
  ++s.steps_since_sync;
}

Eigen::MatrixXd cov_step(PredictorState& s, const PlantModel& m,
                         const KalmanGainSet& gains) {
  const Eigen::Index n = m.n();
  if (s.Pz.rows() != 2 * n) {
    throw std::invalid_argument("cov_step: state dimension mismatch");
  }
  const Eigen::MatrixXd LC = gains.L * m.C;
  const Eigen::MatrixXd LRLt = gains.L * m.R * gains.L.transpose();

  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  F.topLeftCorner(n, n) = m.A - LC;
  F.bottomLeftCorner(n, n) = LC;
  F.bottomRightCorner(n, n) = m.A;

  Eigen::MatrixXd Pi(2 * n, 2 * n);
  Pi.topLeftCorner(n, n) = m.Q + LRLt;
  Pi.topRightCorner(n, n) = -LRLt;
  Pi.bottomLeftCorner(n, n) = -LRLt;
  Pi.bottomRightCorner(n, n) = LRLt;

  s.Pz = (F * s.Pz * F.transpose() + Pi).eval();
  s.Pz = (0.5 * (s.Pz + s.Pz.transpose())).eval();
  return residual_cov(s);
}

Eigen::MatrixXd residual_cov(const PredictorState& s) {
  const Eigen::Index n = s.Pz.rows() / 2;
  return s.Pz.bottomRightCorner(n, n);
}

double design_zx(double psi, int n) {
  if (n < 1) throw std::invalid_argument("design_zx: n must be >= 1");
  return chi2_quantile(psi, static_cast<double>(n));
}

GainLaw make_gain_law(double psi, double beta, double gamma, int n) {
  if (!(psi > 0.0 && psi < 1.0)) {
    throw std::invalid_argument("make_gain_law: psi must lie in (0, 1)");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("make_gain_law: beta must lie in (0, 1)");
  }
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("make_gain_law: gamma must be positive");
  }
  GainLaw law;
  law.z_x = design_zx(psi, n);
  law.beta = beta;
  law.gamma = gamma;
  law.z_scale = law.z_x / std::pow(-std::log(beta), 1.0 / gamma);
  return law;
}

double anomaly_score(const Eigen::VectorXd& r_tilde,
                     const Eigen::MatrixXd& Sigma_rt, double ridge) {
  if (Sigma_rt.rows() != r_tilde.size() || Sigma_rt.cols() != r_tilde.size()) {
    throw std::invalid_argument("anomaly_score: dimension mismatch");
  }
  if (!(ridge >= 0.0)) {
    throw std::invalid_argument("anomaly_score: ridge must be >= 0");
  }
  Eigen::MatrixXd S = Sigma_rt;
  S.diagonal().array() += ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  // isPositive() admits semidefinite pivots, so check them directly.
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      !(ldlt.vectorD().minCoeff() > 0.0)) {
    throw std::runtime_error("anomaly_score: residual covariance not PD after ridge");
  }
  return std::max(0.0, r_tilde.dot(ldlt.solve(r_tilde)));
}

double gain_scale(const GainLaw& law, double ztilde) {
  if (!(ztilde >= 0.0)) {
    throw std::invalid_argument("gain_scale: score must be >= 0");
  }
  // Floor at the smallest normal double: the law maps into (0, 1] and the
  // command scaler rejects an underflowed 0.
  return std::max(std::exp(-std::pow(ztilde / law.z_scale, law.gamma)),
                  std::numeric_limits<double>::min());
}

Eigen::VectorXd scale_command(const Eigen::VectorXd& u_nom, double f) {
  if (!(f > 0.0 && f <= 1.0)) {
    throw std::invalid_argument("scale_command: f must lie in (0, 1]");
  }
  return f * u_nom;
}

}  // namespace fdia
