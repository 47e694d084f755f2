#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fdia/loop.hpp"
#include "fdia/qcqp.hpp"
#include "fdia/quintic.hpp"

namespace fdia {

// The attacker is omniscient: it simulates the genuine closed loop from an
// exact state snapshot, noise free. `stealth` gates the innovation budget
// (off when no monitor is deployed); the defence model is encoded in the
// LoopContext the rollouts run against.
struct AttackerConfig {
  Eigen::Matrix2d Kp = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d Kd = Eigen::Matrix2d::Identity();
  double zeta = 1e-3;
  double tau_prime = 0.0;
  double fd_step = 1e-6;
  double relax = 0.4;  // fraction of the unconstrained increment applied
  bool stealth = true;
  long start = 0;
  QuinticPlan plan;  // end-effector positions, T x 2
};

struct AttackState {
  Eigen::VectorXd a;  // current injection, starts at zero
};

struct RolloutPoint {
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  Eigen::Vector2d pd = Eigen::Vector2d::Zero();
  Eigen::Vector2d pdd = Eigen::Vector2d::Zero();  // second difference
  bool pdd_valid = false;                         // needs two predecessors
  Eigen::VectorXd xhat;
  Eigen::VectorXd r;
  double ztilde = 0.0;
  double f = 1.0;
};

// Noise-free closed-loop propagation from a state snapshot. attack_seq[i]
// is injected at relative step i. Positions depend only on injections at
// least two steps older (actuation delay), so with horizon 2 the leading
// entry alone determines p, pd, the terminal pdd and the offset-0
// innovation. Returns horizon + 1 points.
std::vector<RolloutPoint> rollout(WorldState snap, const LoopContext& ctx,
                                  const std::vector<Eigen::VectorXd>& attack_seq,
                                  int horizon);

// d(pdd at offset 2) / d(injection at offset 0), central differences with
// step fd_step, one column per joint. 2*dof rollouts of horizon 2.
Eigen::MatrixXd sensitivity(const WorldState& snap, const LoopContext& ctx,
                            const Eigen::VectorXd& a_prev, double fd_step);

// PD + feedforward tracking acceleration against the planned trajectory,
// evaluated on the drift prediction (injection held, increment zero).
Eigen::Vector2d target_accel(const WorldState& snap, const LoopContext& ctx,
                             const AttackerConfig& cfg,
                             const Eigen::VectorXd& a_prev, long plan_idx);

// Pure form used internally once the drift prediction is available.
Eigen::Vector2d target_accel_from(const AttackerConfig& cfg, long plan_idx,
                                  const Eigen::Vector2d& p_sim,
                                  const Eigen::Vector2d& pd_sim);

// H = Z'Z + zeta I, g = -Z' (pdd_target - pdd_base); constraint
// (delta + c)' Sigma^-1 (delta + c) <= tau_prime expanded into the
// canonical quadratic form. delta = -c is always strictly feasible.
QcqpProblem assemble_qcqp(const Eigen::MatrixXd& Z,
                          const Eigen::Vector2d& pdd_target,
                          const Eigen::Vector2d& pdd_base,
                          const Eigen::VectorXd& c_k,
                          const Eigen::MatrixXd& Sigma, double zeta,
                          double tau_prime);

struct AttackDiag {
  long k = 0;
  long plan_idx = 0;
  Eigen::VectorXd delta;
  double delta_norm = 0.0;
  double multiplier = 0.0;
  bool active = false;
  double budget_used = 0.0;   // (delta + c)' Sigma^-1 (delta + c)
  double kkt_stat = 0.0;      // stationarity residual, inf norm
  Eigen::Vector2d pdd_target = Eigen::Vector2d::Zero();
  Eigen::Vector2d pdd_base = Eigen::Vector2d::Zero();
  double solve_us = 0.0;      // QCQP time
  double fd_halving_rel = -1.0;  // sensitivity change when halving fd_step;
                                 // computed every 100 attack steps, else -1
};

// One attacker decision: baseline rollout (also provides the drift
// prediction and the baseline innovation), sensitivity, target, constrained
// increment. Updates state.a.
AttackDiag attack_step(AttackState& state, const WorldState& world,
                       const LoopContext& model_ctx, const AttackerConfig& cfg);

}  // namespace fdia
