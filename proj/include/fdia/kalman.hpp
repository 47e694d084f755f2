#pragma once

#include <Eigen/Dense>

#include "fdia/dare.hpp"
#include "fdia/plant.hpp"

namespace fdia {

// Steady-state filter in single-step innovation form:
//   xhat' = A xhat + B u + L (y - C xhat)
// The estimate at step k therefore uses measurements up to step k-1 only.
struct KalmanGainSet {
  Eigen::MatrixXd P;      // prediction error covariance (DARE fixed point)
  Eigen::MatrixXd Sigma;  // innovation covariance C P C' + R
  Eigen::MatrixXd L;      // A P C' Sigma^-1
  Eigen::LLT<Eigen::MatrixXd> Sigma_llt;
  double rho_closed = 0.0;  // spectral radius of A - L C
};

struct EstimatorState {
  Eigen::VectorXd xhat;
};

KalmanGainSet kf_design(const PlantModel& m, const DareOptions& opt = {});

struct KfStep {
  EstimatorState state;
  Eigen::VectorXd innovation;
};

KfStep kf_step(const EstimatorState& s, const KalmanGainSet& gains,
               const PlantModel& m, const Eigen::VectorXd& u,
               const Eigen::VectorXd& y_tilde);

}  // namespace fdia
