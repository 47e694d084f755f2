#pragma once

#include <Eigen/Dense>

#include "fdia/kalman.hpp"
#include "fdia/plant.hpp"

namespace fdia {

// Attack-free twin of the estimator: resynchronized to xhat periodically,
// then propagated open loop on the commanded input only. Pz tracks the
// joint covariance of (estimation error, xhat - xtilde) since the last sync.
struct PredictorState {
  Eigen::VectorXd xtilde;
  Eigen::MatrixXd Pz;  // 2n x 2n
  int steps_since_sync = 0;
  int sync_period = 0;
};

PredictorState make_predictor(const Eigen::VectorXd& xhat,
                              const KalmanGainSet& gains, int sync_period);

// Sets xtilde = xhat, Pz = blkdiag(P, 0), steps_since_sync = 0.
void resync(PredictorState& s, const Eigen::VectorXd& xhat,
            const KalmanGainSet& gains);

// xtilde' = A xtilde + B u; also counts the step.
void predictor_step(PredictorState& s, const PlantModel& m,
                    const Eigen::VectorXd& u);

// One step of the closed-form covariance recursion for the augmented state
// (e, xhat - xtilde); returns the residual block of the updated Pz.
Eigen::MatrixXd cov_step(PredictorState& s, const PlantModel& m,
                         const KalmanGainSet& gains);

// Residual covariance block of the current Pz.
Eigen::MatrixXd residual_cov(const PredictorState& s);

// exp(-(z/z_scale)^gamma): 1 at z = 0, strictly decreasing, equal to beta
// at z = z_x by construction of z_scale.
struct GainLaw {
  double z_x = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double z_scale = 0.0;
};

// z_x = chi2 quantile of psi at n dof.
double design_zx(double psi, int n);

GainLaw make_gain_law(double psi, double beta, double gamma, int n);

// ztilde = r' (Sigma_rt + ridge I)^-1 r.
double anomaly_score(const Eigen::VectorXd& r_tilde,
                     const Eigen::MatrixXd& Sigma_rt, double ridge);

double gain_scale(const GainLaw& law, double ztilde);

Eigen::VectorXd scale_command(const Eigen::VectorXd& u_nom, double f);

}  // namespace fdia
