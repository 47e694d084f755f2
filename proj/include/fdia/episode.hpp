#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fdia/attacker.hpp"
#include "fdia/loop.hpp"
#include "fdia/scenario.hpp"

namespace fdia {

// Column-per-signal record of a full episode; row k holds the step-k values
// (states before actuation, as produced by step_world).
struct EpisodeTrace {
  long steps = 0;
  int dof = 0;
  double ts = 0.0;
  long attack_start = 0;
  long attack_len = 0;
  Mode mode = Mode::defended;

  Eigen::MatrixXd q, qd;          // steps x dof, true joint state
  Eigen::MatrixXd xhat, xtilde;   // steps x 2 dof
  Eigen::MatrixXd y, ytilde, a, delta, r;  // steps x dof
  Eigen::MatrixXd u_nom, u;       // steps x dof
  Eigen::VectorXd z, w, ztilde, f;
  std::vector<std::uint8_t> alarm, scored, resynced;
  Eigen::MatrixXd ee, ref, plan;  // steps x 2, end-effector and references
};

struct EpisodeResult {
  EpisodeTrace trace;
  std::vector<AttackDiag> attack_diag;
  double tau = 0.0;
  double tau_prime = 0.0;
  double z_x = 0.0;
  double kp = 0.0, kd = 0.0;
};

EpisodeResult run_episode(const ScenarioConfig& cfg);

}  // namespace fdia
