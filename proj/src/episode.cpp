#include "fdia/episode.hpp"

#include "fdia/noise.hpp"

namespace fdia {

EpisodeResult run_episode(const ScenarioConfig& cfg) {
  const LoopContext ctx = build_context(cfg);

  // The attacker simulates against the genuine loop by default; the ablation
  // flag lets it assume the defence is absent while the real one runs.
  LoopContext model_ctx = ctx;
  if (cfg.attacker_models_defence == 0) {
    model_ctx.defence_enabled = false;
  } else if (cfg.attacker_models_defence == 1) {
    model_ctx.defence_enabled = true;
  }

  const int n = ctx.model.n();
  const int p = ctx.model.p();
  const bool attacking = cfg.attack_len > 0;

  AttackerConfig atk;
  AttackState atk_state;
  atk_state.a = Eigen::VectorXd::Zero(p);
  if (attacking) {
    atk.Kp = cfg.attacker_kp * Eigen::Matrix2d::Identity();
    atk.Kd = cfg.attacker_kd * Eigen::Matrix2d::Identity();
    atk.zeta = cfg.attacker_zeta;
    atk.fd_step = cfg.attacker_fd_step;
    atk.relax = cfg.attacker_relax;
    atk.stealth = cfg.mode != Mode::undefended;
    atk.tau_prime = ctx.tau / static_cast<double>(cfg.attack_len);
    atk.start = cfg.attack_start;
    atk.plan = quintic_plan(
        ctx.nominal.pos.head<2>(),
        Eigen::Vector2d(cfg.attack_target_x, cfg.attack_target_y),
        static_cast<int>(cfg.attack_len), cfg.ts);
  }

  const Eigen::VectorXd q0 = Eigen::Map<const Eigen::VectorXd>(
      cfg.q0.data(), static_cast<Eigen::Index>(cfg.q0.size()));
  WorldState world = init_world(ctx, q0);
  GaussianSampler rng(cfg.seed);

  const auto draw_noises = [&](Eigen::VectorXd& wn, Eigen::VectorXd& vn) {
    // Fixed draw order (process first) keeps runs bit-reproducible.
    wn = ctx.model.Q_chol * rng.normal(n);
    vn = ctx.model.R_chol * rng.normal(p);
  };

  Eigen::VectorXd wn, vn;
  for (long k = 0; k < cfg.warmup; ++k) {
    draw_noises(wn, vn);
    step_world(world, ctx, Eigen::VectorXd::Zero(p), wn, vn);
  }
  world.k = 0;

  const long N = cfg.episode_len;
  EpisodeResult out;
  EpisodeTrace& tr = out.trace;
  tr.steps = N;
  tr.dof = p;
  tr.ts = cfg.ts;
  tr.attack_start = attacking ? cfg.attack_start : 0;
  tr.attack_len = attacking ? cfg.attack_len : 0;
  tr.mode = cfg.mode;
  tr.q.resize(N, p);
  tr.qd.resize(N, p);
  tr.xhat.resize(N, n);
  tr.xtilde.resize(N, n);
  tr.y.resize(N, p);
  tr.ytilde.resize(N, p);
  tr.a.resize(N, p);
  tr.delta.resize(N, p);
  tr.r.resize(N, p);
  tr.u_nom.resize(N, p);
  tr.u.resize(N, p);
  tr.z.resize(N);
  tr.w.resize(N);
  tr.ztilde.resize(N);
  tr.f.resize(N);
  tr.alarm.assign(N, 0);
  tr.scored.assign(N, 0);
  tr.resynced.assign(N, 0);
  tr.ee.resize(N, 2);
  tr.ref.resize(N, 2);
  tr.plan.resize(N, 2);

  out.tau = ctx.tau;
  out.tau_prime = atk.tau_prime;
  out.z_x = ctx.law.z_x;
  out.kp = ctx.gains.Kpp(0, 0);
  out.kd = ctx.gains.Kdp(0, 0);

  const Eigen::RowVector2d ref_xy = ctx.nominal.pos.head<2>().transpose();
  for (long k = 0; k < N; ++k) {
    draw_noises(wn, vn);

    Eigen::VectorXd delta = Eigen::VectorXd::Zero(p);
    const bool in_window = attacking && k >= cfg.attack_start &&
                           k < cfg.attack_start + cfg.attack_len;
    if (in_window) {
      AttackDiag diag = attack_step(atk_state, world, model_ctx, atk);
      delta = diag.delta;
      out.attack_diag.push_back(std::move(diag));
    }
    // Outside the window the last injection is held; dropping it to zero
    // would spike the innovation and give the attack away.
    const Eigen::VectorXd a_k =
        (attacking && k >= cfg.attack_start) ? atk_state.a
                                             : Eigen::VectorXd::Zero(p);

    tr.q.row(k) = joint_positions(world.x).transpose();
    tr.qd.row(k) = joint_velocities(world.x).transpose();
    tr.xhat.row(k) = world.est.xhat.transpose();
    tr.xtilde.row(k) = world.pred.xtilde.transpose();

    const StepRecord rec = step_world(world, ctx, a_k, wn, vn);

    tr.y.row(k) = rec.y.transpose();
    tr.ytilde.row(k) = rec.y_tilde.transpose();
    tr.a.row(k) = a_k.transpose();
    tr.delta.row(k) = delta.transpose();
    tr.r.row(k) = rec.r.transpose();
    tr.u_nom.row(k) = rec.u_nom.transpose();
    tr.u.row(k) = rec.u.transpose();
    tr.z(k) = rec.z;
    tr.w(k) = rec.w;
    tr.ztilde(k) = rec.ztilde;
    tr.f(k) = rec.f;
    tr.alarm[k] = rec.alarm ? 1 : 0;
    tr.scored[k] = rec.scored ? 1 : 0;
    tr.resynced[k] = rec.resynced ? 1 : 0;
    tr.ee.row(k) = rec.ee_pos.transpose();
    tr.ref.row(k) = ref_xy;
    if (attacking && k >= cfg.attack_start) {
      const long i = std::min(k - cfg.attack_start, cfg.attack_len - 1);
      tr.plan.row(k) = atk.plan.pos.row(i);
    } else {
      tr.plan.row(k) = ref_xy;
    }
  }
  return out;
}

}  // namespace fdia
