#pragma once

#include <Eigen/Dense>

#include "fdia/controller.hpp"
#include "fdia/defence.hpp"
#include "fdia/detector.hpp"
#include "fdia/kalman.hpp"
#include "fdia/plant.hpp"
#include "fdia/scenario.hpp"

namespace fdia {

// Immutable per-scenario data shared by the episode runner and by attacker
// rollouts. The attacker may simulate against a variant of this context
// (e.g. with the defence stripped) without touching the real one.
struct LoopContext {
  PlanarChain chain;
  PlantModel model;
  KalmanGainSet kf;
  TaskGains gains;
  double rank_tol = 1e-10;

  bool ads_enabled = true;  // alarms only exist when the monitor is deployed
  double tau = 0.0;
  int detector_window = 0;

  bool defence_enabled = true;
  GainLaw law;
  int k_min = 0;
  double ridge_rel = 0.0;
  int sync_period = 0;

  TaskRef nominal;  // constant hold reference
};

// Builds chain, plant, filter, gains, thresholds and the nominal hold pose
// from a validated config. The mode flags follow cfg.mode.
LoopContext build_context(const ScenarioConfig& cfg);

// Full mutable state of the co-simulation. Copying it yields the attacker's
// world snapshot; there is no hidden state outside this struct.
struct WorldState {
  Eigen::VectorXd x;
  EstimatorState est;
  DetectorState det;
  PredictorState pred;
  Eigen::VectorXd a_prev;
  long k = 0;
};

WorldState init_world(const LoopContext& ctx, const Eigen::VectorXd& q0);

// Signals produced while stepping; everything refers to the cycle's own
// step index k (states before actuation).
struct StepRecord {
  Eigen::VectorXd y, y_tilde, r;
  double z = 0.0, w = 0.0;
  bool alarm = false;
  double ztilde = 0.0, f = 1.0;
  bool scored = false;
  Eigen::VectorXd u_nom, u;
  Eigen::Vector2d ee_pos = Eigen::Vector2d::Zero();
  Eigen::Vector2d ee_vel = Eigen::Vector2d::Zero();
  bool resynced = false;
};

// One cycle: measure -> innovate -> detect -> score/scale -> control ->
// actuate -> predict -> resync bookkeeping. The estimate used by the
// controller predates the cycle's own measurement, so an injection at step k
// first reaches the command at k+1 and the end effector at k+2.
StepRecord step_world(WorldState& w, const LoopContext& ctx,
                      const Eigen::VectorXd& attack,
                      const Eigen::VectorXd& w_noise,
                      const Eigen::VectorXd& v_noise);

}  // namespace fdia
