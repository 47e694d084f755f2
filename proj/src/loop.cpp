#include "fdia/loop.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdia {

LoopContext build_context(const ScenarioConfig& cfg) {
  validate(cfg);
  LoopContext ctx;
  ctx.chain = make_chain(Eigen::Map<const Eigen::VectorXd>(
      cfg.chain_lengths.data(), static_cast<Eigen::Index>(cfg.chain_lengths.size())));
  ctx.model = make_plant_model(ctx.chain.dof(), cfg.ts, cfg.qc, cfg.r_blk);
  ctx.kf = kf_design(ctx.model);
  const auto [kp, kd] = lqr_gains(cfg.ts, cfg.lqr_w_pos, cfg.lqr_w_vel, cfg.lqr_w_u);
  ctx.gains = make_task_gains(kp, kd);
  ctx.rank_tol = cfg.rank_tol;

  ctx.ads_enabled = cfg.mode != Mode::undefended;
  ctx.detector_window = cfg.detector_window;
  ctx.tau = calibrate_threshold(1.0 / cfg.detector_arl, ctx.model.p(),
                                cfg.detector_window);

  ctx.defence_enabled = cfg.mode == Mode::defended;
  ctx.law = make_gain_law(cfg.defence_psi, cfg.defence_beta, cfg.defence_gamma,
                          ctx.model.n());
  ctx.k_min = cfg.defence_k_min;
  ctx.ridge_rel = cfg.defence_ridge_rel;
  ctx.sync_period = cfg.defence_sync_period;

  const Eigen::VectorXd q0 = Eigen::Map<const Eigen::VectorXd>(
      cfg.q0.data(), static_cast<Eigen::Index>(cfg.q0.size()));
  const Pose hold = fk(ctx.chain, q0);
  ctx.nominal.pos = hold.position;
  ctx.nominal.rot = hold.rotation;
  return ctx;
}

WorldState init_world(const LoopContext& ctx, const Eigen::VectorXd& q0) {
  if (q0.size() != ctx.chain.dof()) {
    throw std::invalid_argument("init_world: q0 size mismatch");
  }
  WorldState w;
  w.x = interleave_state(q0, Eigen::VectorXd::Zero(q0.size()));
  w.est.xhat = w.x;  // the filter starts converged on the true state
  w.det = make_detector(ctx.tau, ctx.detector_window);
  w.pred = make_predictor(w.est.xhat, ctx.kf, ctx.sync_period);
  w.a_prev = Eigen::VectorXd::Zero(ctx.model.p());
  return w;
}

StepRecord step_world(WorldState& w, const LoopContext& ctx,
                      const Eigen::VectorXd& attack,
                      const Eigen::VectorXd& w_noise,
                      const Eigen::VectorXd& v_noise) {
  StepRecord rec;
  const PlantModel& m = ctx.model;

  // Measurement and the compromised sensor value.
  rec.y = measure(m, w.x, v_noise, Eigen::VectorXd::Zero(m.p()));
  rec.y_tilde = rec.y + attack;

  // Detector feeds on the innovation against the current estimate.
  rec.r = rec.y_tilde - m.C * w.est.xhat;
  // Quadratic form is nonnegative; rounding can drag eps-scale residuals below 0.
  rec.z = std::max(0.0, rec.r.dot(ctx.kf.Sigma_llt.solve(rec.r)));
  const DetectorStep det = detector_step(w.det, rec.z);
  rec.w = det.w;
  rec.alarm = ctx.ads_enabled && det.alarm;

  // Defence score on the predictor residual; suppressed right after a sync
  // while the residual covariance is still rank deficient.
  if (w.pred.steps_since_sync >= ctx.k_min) {
    const Eigen::VectorXd r_tilde = w.est.xhat - w.pred.xtilde;
    const Eigen::MatrixXd Srt = residual_cov(w.pred);
    const double ridge = ctx.ridge_rel * Srt.trace() / static_cast<double>(m.n());
    rec.ztilde = anomaly_score(r_tilde, Srt, ridge);
    rec.scored = true;
  }
  rec.f = ctx.defence_enabled && rec.scored ? gain_scale(ctx.law, rec.ztilde) : 1.0;

  // Controller runs on the estimate, which predates this cycle's measurement.
  const Eigen::VectorXd qhat = joint_positions(w.est.xhat);
  const Eigen::VectorXd qdhat = joint_velocities(w.est.xhat);
  const Pose est_pose = fk(ctx.chain, qhat);
  const Eigen::Vector3d twist = jacobian(ctx.chain, qhat) * qdhat;
  const Eigen::Vector3d est_vel(twist(0), twist(1), 0.0);
  const Eigen::Vector3d est_angvel(0.0, 0.0, twist(2));
  const Vector6d u_task =
      task_pd(ctx.nominal, est_pose, est_vel, est_angvel, ctx.gains);
  rec.u_nom = map_to_joints(u_task, ctx.chain, qhat, qdhat, ctx.rank_tol);
  rec.u = scale_command(rec.u_nom, rec.f);

  // True end-effector signals at this step, before actuation.
  const Eigen::VectorXd q = joint_positions(w.x);
  const Eigen::VectorXd qd = joint_velocities(w.x);
  rec.ee_pos = fk(ctx.chain, q).position.head<2>();
  rec.ee_vel = (jacobian(ctx.chain, q) * qd).head<2>();

  // Actuate plant, filter and predictor on the same command.
  w.x = step_plant(m, w.x, rec.u, w_noise);
  const KfStep kstep = kf_step(w.est, ctx.kf, m, rec.u, rec.y_tilde);
  w.est = kstep.state;
  predictor_step(w.pred, m, rec.u);
  cov_step(w.pred, m, ctx.kf);
  if (w.pred.steps_since_sync >= ctx.sync_period) {
    resync(w.pred, w.est.xhat, ctx.kf);
    rec.resynced = true;
  }
  w.a_prev = attack;
  ++w.k;
  return rec;
}

}  // namespace fdia
