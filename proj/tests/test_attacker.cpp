#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "fdia/attacker.hpp"
#include "fdia/loop.hpp"
#include "fdia/quintic.hpp"
#include "fdia/scenario.hpp"

namespace {

fdia::ScenarioConfig defended_config() {
  fdia::ScenarioConfig cfg;
  cfg.mode = fdia::Mode::defended;
  return cfg;
}

struct Fixture {
  fdia::LoopContext ctx;
  fdia::WorldState world;
  fdia::AttackerConfig atk;

  explicit Fixture(const fdia::ScenarioConfig& cfg)
      : ctx(fdia::build_context(cfg)) {
    Eigen::VectorXd q0(6);
    for (int i = 0; i < 6; ++i) q0(i) = cfg.q0[i];
    world = fdia::init_world(ctx, q0);

    atk.Kp = cfg.attacker_kp * Eigen::Matrix2d::Identity();
    atk.Kd = cfg.attacker_kd * Eigen::Matrix2d::Identity();
    atk.zeta = cfg.attacker_zeta;
    atk.tau_prime = ctx.tau / cfg.attack_len;
    atk.fd_step = cfg.attacker_fd_step;
    atk.stealth = true;
    atk.start = 0;
    atk.plan = fdia::quintic_plan(
        ctx.nominal.pos.head<2>(),
        Eigen::Vector2d(cfg.attack_target_x, cfg.attack_target_y),
        cfg.attack_len, cfg.ts);
  }
};

Eigen::VectorXd joint_vec(double v0) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(6);
  a(0) = v0;
  return a;
}

}  // namespace

TEST_CASE("rollout validates the injection sequence length") {
  Fixture fx(defended_config());
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  CHECK_THROWS_AS(fdia::rollout(fx.world, fx.ctx, {z, z}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(fdia::rollout(fx.world, fx.ctx, {z, z, z, z}, 2),
                  std::invalid_argument);
  const auto traj = fdia::rollout(fx.world, fx.ctx, {z, z, z}, 2);
  CHECK(traj.size() == 3);
  CHECK_FALSE(traj[0].pdd_valid);
  CHECK_FALSE(traj[1].pdd_valid);
  CHECK(traj[2].pdd_valid);
}

TEST_CASE("entries after the leading injection cannot move the horizon") {
  Fixture fx(defended_config());
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  const Eigen::VectorXd a = joint_vec(2e-3);
  Eigen::VectorXd junk = Eigen::VectorXd::Constant(6, 0.5);

  const auto clean = fdia::rollout(fx.world, fx.ctx, {a, z, z}, 2);
  const auto noisy = fdia::rollout(fx.world, fx.ctx, {a, junk, -junk}, 2);

  for (int i = 0; i <= 2; ++i) {
    CHECK((clean[i].p - noisy[i].p).cwiseAbs().maxCoeff() == 0.0);
    CHECK((clean[i].pd - noisy[i].pd).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((clean[2].pdd - noisy[2].pdd).cwiseAbs().maxCoeff() == 0.0);
  CHECK((clean[0].r - noisy[0].r).cwiseAbs().maxCoeff() == 0.0);
  // Later innovations do see the junk; this is not a stale simulator.
  CHECK((clean[1].r - noisy[1].r).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("leading injection needs two steps to reach the end effector") {
  Fixture fx(defended_config());
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  const auto base = fdia::rollout(fx.world, fx.ctx, {z, z, z}, 2);
  const auto hit = fdia::rollout(fx.world, fx.ctx, {joint_vec(1e-3), z, z}, 2);

  CHECK((base[0].p - hit[0].p).cwiseAbs().maxCoeff() == 0.0);
  CHECK((base[1].p - hit[1].p).cwiseAbs().maxCoeff() == 0.0);
  CHECK((base[2].p - hit[2].p).cwiseAbs().maxCoeff() > 0.0);
  CHECK((base[2].pdd - hit[2].pdd).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("baseline innovation equals the held injection at convergence") {
  Fixture fx(defended_config());
  // init_world starts the estimate on the true state, so the noise-free
  // innovation is the injection itself.
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  Eigen::VectorXd a(6);
  a << 1e-3, -2e-3, 0.0, 5e-4, 0.0, -1e-4;
  const auto base = fdia::rollout(fx.world, fx.ctx, {a, z, z}, 2);
  // y and C xhat agree to rounding, so r - a is at the noise floor of the
  // measurement magnitudes (a few ulp of the joint angles).
  CHECK((base[0].r - a).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("sensitivity is a first-order model of the horizon response") {
  Fixture fx(defended_config());
  const Eigen::VectorXd a_prev = Eigen::VectorXd::Zero(6);
  const Eigen::MatrixXd Z =
      fdia::sensitivity(fx.world, fx.ctx, a_prev, 1e-6);
  CHECK(Z.rows() == 2);
  CHECK(Z.cols() == 6);
  CHECK(Z.norm() > 0.0);

  // Predicted vs simulated response to a small but finite increment.
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(6);
  Eigen::VectorXd da(6);
  da << 3e-4, -2e-4, 1e-4, 0.0, 2e-4, -1e-4;
  const auto base = fdia::rollout(fx.world, fx.ctx, {a_prev, z, z}, 2);
  const auto moved = fdia::rollout(fx.world, fx.ctx, {a_prev + da, z, z}, 2);
  const Eigen::Vector2d got = moved[2].pdd - base[2].pdd;
  const Eigen::Vector2d lin = Z * da;
  CHECK((got - lin).norm() < 1e-3 * lin.norm());
}

TEST_CASE("halving the difference step barely moves the sensitivity") {
  Fixture fx(defended_config());
  const Eigen::VectorXd a_prev = Eigen::VectorXd::Zero(6);
  const Eigen::MatrixXd Z1 = fdia::sensitivity(fx.world, fx.ctx, a_prev, 1e-6);
  const Eigen::MatrixXd Z2 = fdia::sensitivity(fx.world, fx.ctx, a_prev, 5e-7);
  CHECK((Z1 - Z2).norm() / Z1.norm() < 1e-4);
}

TEST_CASE("difference error shrinks quadratically at coarse steps") {
  // At steps where truncation dominates rounding, halving the step should
  // divide the central-difference error by about four.
  Fixture fx(defended_config());
  const Eigen::VectorXd a_prev = Eigen::VectorXd::Zero(6);
  const Eigen::MatrixXd Za = fdia::sensitivity(fx.world, fx.ctx, a_prev, 0.04);
  const Eigen::MatrixXd Zb = fdia::sensitivity(fx.world, fx.ctx, a_prev, 0.02);
  const Eigen::MatrixXd Zc = fdia::sensitivity(fx.world, fx.ctx, a_prev, 0.01);
  const double coarse = (Za - Zb).norm();
  const double fine = (Zb - Zc).norm();
  CHECK(fine > 0.0);
  const double ratio = coarse / fine;
  CHECK(ratio > 2.0);
  CHECK(ratio < 8.0);
}

TEST_CASE("tracking target follows the pd law on the plan") {
  fdia::AttackerConfig cfg;
  cfg.Kp = 10.0 * Eigen::Matrix2d::Identity();
  cfg.Kd = 6.0 * Eigen::Matrix2d::Identity();
  cfg.plan = fdia::quintic_plan(Eigen::Vector2d(0.0, 0.0),
                                Eigen::Vector2d(1.0, 2.0), 50, 0.01);

  const Eigen::Vector2d p_sim(0.1, 0.2);
  const Eigen::Vector2d pd_sim(0.5, -0.5);
  const long idx = 7;
  const Eigen::Vector2d expect =
      10.0 * (cfg.plan.pos.row(idx + 1).transpose() - p_sim) +
      6.0 * (cfg.plan.vel.row(idx + 1).transpose() - pd_sim) +
      cfg.plan.acc.row(idx).transpose();
  const Eigen::Vector2d got = fdia::target_accel_from(cfg, idx, p_sim, pd_sim);
  CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-14);

  // Past the end of the plan the terminal row holds.
  const Eigen::Vector2d tail = fdia::target_accel_from(cfg, 500, p_sim, pd_sim);
  const Eigen::Vector2d tail_expect =
      10.0 * (cfg.plan.pos.row(49).transpose() - p_sim) +
      6.0 * (cfg.plan.vel.row(49).transpose() - pd_sim) +
      cfg.plan.acc.row(49).transpose();
  CHECK((tail - tail_expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("qcqp assembly identities") {
  Fixture fx(defended_config());
  Eigen::MatrixXd Z(2, 6);
  Z << 1.0, -2.0, 0.5, 0.0, 1.5, -0.5, 0.3, 0.7, -1.1, 2.0, 0.0, 0.4;
  const Eigen::Vector2d target(3.0, -1.0);
  const Eigen::Vector2d base(0.5, 0.5);
  Eigen::VectorXd c_k(6);
  c_k << 1e-3, -2e-3, 5e-4, 0.0, -1e-3, 2e-3;
  const double zeta = 1e-3;
  const double tau_prime = 0.15;

  const auto prob = fdia::assemble_qcqp(Z, target, base, c_k,
                                        fx.ctx.kf.Sigma, zeta, tau_prime);

  CHECK((prob.H - (Z.transpose() * Z +
                   zeta * Eigen::MatrixXd::Identity(6, 6)))
            .norm() < 1e-14);
  CHECK((prob.g + Z.transpose() * (target - base)).norm() < 1e-14);
  CHECK((prob.O - prob.O.transpose()).norm() == 0.0);
  CHECK((prob.O * fx.ctx.kf.Sigma - Eigen::MatrixXd::Identity(6, 6)).norm() <
        1e-10);
  CHECK((prob.b - 2.0 * prob.O * c_k).norm() < 1e-12);

  // The zero-innovation point sits exactly tau_prime inside the budget.
  const double q_at_cancel =
      c_k.dot(prob.O * c_k) - prob.b.dot(c_k) + prob.c;
  CHECK(q_at_cancel ==
        doctest::Approx(-tau_prime).epsilon(1e-12));
}

TEST_CASE("stealthy attack step saturates the budget when the target is far") {
  Fixture fx(defended_config());
  // Point the attacker 600 steps into its plan so the tracking error is
  // large and the innovation budget must bind.
  fx.atk.start = -600;

  fdia::AttackState st;
  st.a = Eigen::VectorXd::Zero(6);
  const Eigen::VectorXd a_before = st.a;
  const auto diag = fdia::attack_step(st, fx.world, fx.ctx, fx.atk);

  CHECK((st.a - (a_before + diag.delta)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(diag.delta_norm == doctest::Approx(diag.delta.norm()));
  CHECK(diag.active);
  CHECK(diag.multiplier > 0.0);
  CHECK(diag.budget_used <= fx.atk.tau_prime * (1.0 + 1e-9));
  CHECK(diag.budget_used >= fx.atk.tau_prime * (1.0 - 1e-6));
  CHECK(diag.kkt_stat <= 1e-8 * std::max(1.0, diag.pdd_target.norm()));
  CHECK(diag.solve_us >= 0.0);
  CHECK(diag.plan_idx == 600);
  // Multiple-of-100 plan steps run the halving diagnostic.
  CHECK(diag.fd_halving_rel >= 0.0);
  CHECK(diag.fd_halving_rel < 1e-3);
}

TEST_CASE("near the plan start the increment stays interior") {
  Fixture fx(defended_config());
  fdia::AttackState st;
  st.a = Eigen::VectorXd::Zero(6);
  const auto diag = fdia::attack_step(st, fx.world, fx.ctx, fx.atk);
  // The quintic leaves the hold pose with zero velocity and acceleration,
  // so the first target is tiny and the budget does not bind.
  CHECK_FALSE(diag.active);
  CHECK(diag.multiplier == 0.0);
  CHECK(diag.budget_used <= fx.atk.tau_prime * (1.0 + 1e-9));
}

TEST_CASE("successive stealthy steps keep the injection within budget") {
  Fixture fx(defended_config());
  fx.atk.start = -600;
  fdia::AttackState st;
  st.a = Eigen::VectorXd::Zero(6);

  const Eigen::VectorXd zero_w = Eigen::VectorXd::Zero(12);
  const Eigen::VectorXd zero_v = Eigen::VectorXd::Zero(6);
  for (int k = 0; k < 5; ++k) {
    const auto diag = fdia::attack_step(st, fx.world, fx.ctx, fx.atk);
    CHECK(diag.budget_used <= fx.atk.tau_prime * (1.0 + 1e-9));
    fdia::step_world(fx.world, fx.ctx, st.a, zero_w, zero_v);
  }
  CHECK(st.a.norm() > 0.0);
}

TEST_CASE("non-stealth step solves the unconstrained ridge problem") {
  Fixture fx(defended_config());
  fx.atk.start = -600;
  fdia::AttackerConfig atk = fx.atk;
  atk.stealth = false;

  fdia::AttackState st;
  st.a = Eigen::VectorXd::Zero(6);
  const auto diag = fdia::attack_step(st, fx.world, fx.ctx, atk);

  CHECK(diag.multiplier == 0.0);
  CHECK_FALSE(diag.active);
  CHECK(diag.kkt_stat <= 1e-9 * std::max(1.0, diag.pdd_target.norm()));
  // With no budget the increment dwarfs the constrained one.
  fdia::AttackState st2;
  st2.a = Eigen::VectorXd::Zero(6);
  const auto diag2 = fdia::attack_step(st2, fx.world, fx.ctx, fx.atk);
  CHECK(diag2.active);
  CHECK(diag.delta_norm > 10.0 * diag2.delta_norm);
}
