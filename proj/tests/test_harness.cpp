#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "doctest.h"
#include "fdia/csv.hpp"
#include "fdia/episode.hpp"
#include "fdia/loop.hpp"
#include "fdia/metrics.hpp"
#include "fdia/scenario.hpp"

namespace {

bool same_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

fdia::ScenarioConfig short_attack_config(fdia::Mode mode, std::uint64_t seed) {
  fdia::ScenarioConfig cfg;
  cfg.mode = mode;
  cfg.seed = seed;
  cfg.episode_len = 60;
  cfg.attack_start = 20;
  cfg.attack_len = 30;
  return cfg;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/fdia_test_") + name;
}

}  // namespace

TEST_CASE("config parsing: defaults and overrides") {
  const auto cfg = fdia::parse_config("");
  CHECK(cfg.chain_lengths.size() == 6);
  CHECK(cfg.ts == 0.01);
  CHECK(cfg.detector_window == 20);
  CHECK(cfg.attack_len == 1200);
  CHECK(cfg.mode == fdia::Mode::defended);
  CHECK(cfg.q0[1] == doctest::Approx(M_PI / 8).epsilon(1e-15));

  const auto cfg2 = fdia::parse_config(
      "ts = 0.02            # comment after value\n"
      "# full comment line\n"
      "\n"
      "attack_target = -1.5 0.5\n"
      "mode = po\n"
      "seed = 42\n"
      "attacker_models_defence = off\n");
  CHECK(cfg2.ts == 0.02);
  CHECK(cfg2.attack_target_x == -1.5);
  CHECK(cfg2.attack_target_y == 0.5);
  CHECK(cfg2.mode == fdia::Mode::passive_only);
  CHECK(cfg2.seed == 42);
  CHECK(cfg2.attacker_models_defence == 0);
}

TEST_CASE("config parsing: mode aliases") {
  CHECK(fdia::mode_from_string("u") == fdia::Mode::undefended);
  CHECK(fdia::mode_from_string("undefended") == fdia::Mode::undefended);
  CHECK(fdia::mode_from_string("po") == fdia::Mode::passive_only);
  CHECK(fdia::mode_from_string("passive") == fdia::Mode::passive_only);
  CHECK(fdia::mode_from_string("d") == fdia::Mode::defended);
  CHECK(fdia::mode_from_string("defended") == fdia::Mode::defended);
  CHECK_THROWS_AS(fdia::mode_from_string("full"), std::invalid_argument);
}

TEST_CASE("config parsing: rejections") {
  CHECK_THROWS_AS(fdia::parse_config("not_a_key = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(fdia::parse_config("ts = 0.01\nts = 0.02\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(fdia::parse_config("ts 0.01\n"), std::invalid_argument);
  CHECK_THROWS_AS(fdia::parse_config("ts = fast\n"), std::invalid_argument);
  CHECK_THROWS_AS(fdia::parse_config("attack_target = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(fdia::parse_config("attack_len = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(fdia::parse_config("detector_window = 2.5\n"),
                  std::invalid_argument);
  // Attack window must fit in the episode.
  CHECK_THROWS_AS(
      fdia::parse_config("episode_len = 100\nattack_start = 50\nattack_len = 60\n"),
      std::invalid_argument);
  CHECK_THROWS_AS(fdia::parse_config("q0 = 0 0 0\n"), std::invalid_argument);
}

TEST_CASE("mode flags gate the monitor and the defence") {
  fdia::ScenarioConfig cfg;
  cfg.mode = fdia::Mode::undefended;
  auto ctx = fdia::build_context(cfg);
  CHECK_FALSE(ctx.ads_enabled);
  CHECK_FALSE(ctx.defence_enabled);

  cfg.mode = fdia::Mode::passive_only;
  ctx = fdia::build_context(cfg);
  CHECK(ctx.ads_enabled);
  CHECK_FALSE(ctx.defence_enabled);

  cfg.mode = fdia::Mode::defended;
  ctx = fdia::build_context(cfg);
  CHECK(ctx.ads_enabled);
  CHECK(ctx.defence_enabled);
  CHECK(ctx.tau == doctest::Approx(182.65056216610404).epsilon(1e-12));

  // The nominal hold pose is the forward kinematics of q0.
  CHECK(ctx.nominal.pos(0) ==
        doctest::Approx(1.4763317944151542).epsilon(1e-14));
  CHECK(ctx.nominal.pos(1) ==
        doctest::Approx(1.810165518594904).epsilon(1e-14));
}

TEST_CASE("world starts converged") {
  fdia::ScenarioConfig cfg;
  const auto ctx = fdia::build_context(cfg);
  Eigen::VectorXd q0(6);
  for (int i = 0; i < 6; ++i) q0(i) = cfg.q0[i];
  const auto w = fdia::init_world(ctx, q0);
  CHECK((w.est.xhat - w.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((w.pred.xtilde - w.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK(w.a_prev.cwiseAbs().maxCoeff() == 0.0);
  CHECK(w.k == 0);
  CHECK(fdia::joint_positions(w.x)(1) == q0(1));
  CHECK(fdia::joint_velocities(w.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("episodes are bit-reproducible per seed") {
  const auto cfg = short_attack_config(fdia::Mode::defended, 7);
  const auto r1 = fdia::run_episode(cfg);
  const auto r2 = fdia::run_episode(cfg);

  CHECK(same_matrix(r1.trace.q, r2.trace.q));
  CHECK(same_matrix(r1.trace.xhat, r2.trace.xhat));
  CHECK(same_matrix(r1.trace.a, r2.trace.a));
  CHECK(same_matrix(r1.trace.u, r2.trace.u));
  CHECK(same_matrix(r1.trace.ee, r2.trace.ee));
  CHECK((r1.trace.z.array() == r2.trace.z.array()).all());
  CHECK((r1.trace.f.array() == r2.trace.f.array()).all());

  auto cfg3 = cfg;
  cfg3.seed = 8;
  const auto r3 = fdia::run_episode(cfg3);
  CHECK_FALSE(same_matrix(r1.trace.q, r3.trace.q));
}

TEST_CASE("undefended episodes never alarm") {
  auto cfg = short_attack_config(fdia::Mode::undefended, 3);
  const auto res = fdia::run_episode(cfg);
  for (long k = 0; k < res.trace.steps; ++k) {
    CHECK(res.trace.alarm[k] == 0);
    CHECK(res.trace.f(k) == 1.0);
  }
  // The detector statistic is still recorded for analysis.
  CHECK(res.trace.w.maxCoeff() > 0.0);
}

TEST_CASE("without an attack the injections stay at zero") {
  fdia::ScenarioConfig cfg;
  cfg.episode_len = 40;
  cfg.attack_len = 0;
  cfg.mode = fdia::Mode::passive_only;
  cfg.seed = 5;
  const auto res = fdia::run_episode(cfg);
  CHECK(res.trace.a.cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.trace.delta.cwiseAbs().maxCoeff() == 0.0);
  CHECK((res.trace.ytilde - res.trace.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((res.trace.f.array() == 1.0).all());
  CHECK(res.attack_diag.empty());
  // Plan column falls back to the hold reference.
  CHECK(same_matrix(res.trace.plan, res.trace.ref));
}

TEST_CASE("defended mode scales commands within (0, 1]") {
  fdia::ScenarioConfig cfg;
  cfg.episode_len = 40;
  cfg.attack_len = 0;
  cfg.mode = fdia::Mode::defended;
  cfg.seed = 5;
  const auto res = fdia::run_episode(cfg);
  for (long k = 0; k < res.trace.steps; ++k) {
    CHECK(res.trace.f(k) > 0.0);
    CHECK(res.trace.f(k) <= 1.0);
    if (res.trace.scored[k]) {
      CHECK(res.trace.f(k) < 1.0);  // exp of a positive score
      const Eigen::VectorXd expect =
          res.trace.f(k) * res.trace.u_nom.row(k).transpose();
      CHECK((res.trace.u.row(k).transpose() - expect).cwiseAbs().maxCoeff() ==
            0.0);
    } else {
      CHECK(res.trace.f(k) == 1.0);
    }
  }
}

TEST_CASE("scoring pauses for k_min steps after start and after resync") {
  fdia::ScenarioConfig cfg;
  cfg.episode_len = 1100;
  cfg.attack_len = 0;
  cfg.mode = fdia::Mode::defended;
  cfg.seed = 2;
  const auto res = fdia::run_episode(cfg);

  for (long k = 0; k < 5; ++k) CHECK(res.trace.scored[k] == 0);
  CHECK(res.trace.scored[5] == 1);

  // Resync fires while stepping k = 499 and k = 999.
  for (long k = 0; k < res.trace.steps; ++k) {
    const bool expect_resync = (k % 500) == 499;
    CHECK(res.trace.resynced[k] == (expect_resync ? 1 : 0));
  }
  for (long k = 500; k < 505; ++k) CHECK(res.trace.scored[k] == 0);
  CHECK(res.trace.scored[505] == 1);
  // The twin is pulled onto the estimate: the stored row after the sync
  // matches the estimate row.
  CHECK((res.trace.xtilde.row(500) - res.trace.xhat.row(500)).norm() == 0.0);
}

TEST_CASE("an injection needs two steps to reach the end effector") {
  fdia::ScenarioConfig cfg;
  const auto ctx = fdia::build_context(cfg);
  Eigen::VectorXd q0(6);
  for (int i = 0; i < 6; ++i) q0(i) = cfg.q0[i];

  auto wa = fdia::init_world(ctx, q0);
  auto wb = fdia::init_world(ctx, q0);
  const Eigen::VectorXd zero_w = Eigen::VectorXd::Zero(12);
  const Eigen::VectorXd zero_v = Eigen::VectorXd::Zero(6);
  const Eigen::VectorXd zero_a = Eigen::VectorXd::Zero(6);
  Eigen::VectorXd inj = Eigen::VectorXd::Zero(6);
  inj(0) = 1e-3;

  const auto ra0 = fdia::step_world(wa, ctx, zero_a, zero_w, zero_v);
  const auto rb0 = fdia::step_world(wb, ctx, inj, zero_w, zero_v);
  // Same command at the injection step; the estimate diverges afterwards.
  CHECK((ra0.u - rb0.u).cwiseAbs().maxCoeff() == 0.0);
  CHECK((wa.x - wb.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((wa.est.xhat - wb.est.xhat).cwiseAbs().maxCoeff() > 0.0);

  const auto ra1 = fdia::step_world(wa, ctx, zero_a, zero_w, zero_v);
  const auto rb1 = fdia::step_world(wb, ctx, zero_a, zero_w, zero_v);
  CHECK((ra1.u - rb1.u).cwiseAbs().maxCoeff() > 0.0);
  CHECK((ra1.ee_pos - rb1.ee_pos).cwiseAbs().maxCoeff() == 0.0);

  const auto ra2 = fdia::step_world(wa, ctx, zero_a, zero_w, zero_v);
  const auto rb2 = fdia::step_world(wb, ctx, zero_a, zero_w, zero_v);
  CHECK((ra2.ee_pos - rb2.ee_pos).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("trace csv round-trips bit for bit") {
  const auto cfg = short_attack_config(fdia::Mode::defended, 9);
  const auto res = fdia::run_episode(cfg);
  const std::string path = temp_path("roundtrip.csv");
  fdia::write_trace_csv(res.trace, path);
  const auto back = fdia::read_trace_csv(path);
  std::remove(path.c_str());

  CHECK(back.steps == res.trace.steps);
  CHECK(back.dof == res.trace.dof);
  CHECK(back.ts == res.trace.ts);
  CHECK(back.attack_start == res.trace.attack_start);
  CHECK(back.attack_len == res.trace.attack_len);
  CHECK(back.mode == res.trace.mode);

  CHECK(same_matrix(back.q, res.trace.q));
  CHECK(same_matrix(back.qd, res.trace.qd));
  CHECK(same_matrix(back.xhat, res.trace.xhat));
  CHECK(same_matrix(back.xtilde, res.trace.xtilde));
  CHECK(same_matrix(back.y, res.trace.y));
  CHECK(same_matrix(back.ytilde, res.trace.ytilde));
  CHECK(same_matrix(back.a, res.trace.a));
  CHECK(same_matrix(back.delta, res.trace.delta));
  CHECK(same_matrix(back.r, res.trace.r));
  CHECK(same_matrix(back.u_nom, res.trace.u_nom));
  CHECK(same_matrix(back.u, res.trace.u));
  CHECK(same_matrix(back.ee, res.trace.ee));
  CHECK(same_matrix(back.ref, res.trace.ref));
  CHECK(same_matrix(back.plan, res.trace.plan));
  CHECK((back.z.array() == res.trace.z.array()).all());
  CHECK((back.w.array() == res.trace.w.array()).all());
  CHECK((back.ztilde.array() == res.trace.ztilde.array()).all());
  CHECK((back.f.array() == res.trace.f.array()).all());
  CHECK(back.alarm == res.trace.alarm);
  CHECK(back.scored == res.trace.scored);
  CHECK(back.resynced == res.trace.resynced);
}

TEST_CASE("metrics csv lists one row per label") {
  const auto cfg = short_attack_config(fdia::Mode::defended, 9);
  const auto res = fdia::run_episode(cfg);
  const auto rep = fdia::compute_metrics(res.trace);
  const std::string path = temp_path("metrics.csv");
  fdia::write_metrics_csv({{"defended", rep}, {"again", rep}}, path);

  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  CHECK(line ==
        "label,window_start,window_len,devmax_plan,devrms_plan,devmax_ref,"
        "devrms_ref,mean_u_norm,alarm_count,max_w,min_f,finite,first_nonfinite");
  int rows = 0;
  while (std::getline(f, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 2);
  f.close();
  std::remove(path.c_str());
}

TEST_CASE("metrics on a hand-built trace") {
  fdia::EpisodeTrace tr;
  tr.steps = 4;
  tr.dof = 1;
  tr.ts = 0.01;
  tr.attack_start = 1;
  tr.attack_len = 2;
  tr.mode = fdia::Mode::defended;
  tr.ee.resize(4, 2);
  tr.ref.resize(4, 2);
  tr.plan.resize(4, 2);
  tr.u.resize(4, 1);
  tr.z.setZero(4);
  tr.w.resize(4);
  tr.f.resize(4);
  tr.ztilde.setZero(4);
  tr.alarm = {1, 0, 0, 1};
  tr.scored.assign(4, 1);
  tr.resynced.assign(4, 0);

  tr.ref << 0, 0, 0, 0, 0, 0, 0, 0;
  tr.plan << 0, 0, 1, 0, 0, 2, 0, 0;
  // Window rows are k = 1, 2: deviations from plan are 1 and 2, from the
  // zero reference 0 and 0. Rows 0 and 3 lie far away but are outside.
  tr.ee << 50, 0, 0, 0, 0, 0, 0, 50;
  tr.u << 9, 3, 4, 9;
  tr.w << 1, 2, 8, 3;
  tr.f << 1, 0.5, 0.25, 1;

  const auto rep = fdia::compute_metrics(tr);
  CHECK(rep.window_start == 1);
  CHECK(rep.window_len == 2);
  CHECK(rep.devmax_plan == doctest::Approx(2.0));
  CHECK(rep.devrms_plan == doctest::Approx(std::sqrt((1.0 + 4.0) / 2.0)));
  CHECK(rep.devmax_ref == doctest::Approx(0.0));
  CHECK(rep.devrms_ref == doctest::Approx(0.0));
  CHECK(rep.mean_u_norm == doctest::Approx(3.5));
  // Alarms and extrema come from the whole trace.
  CHECK(rep.alarm_count == 2);
  CHECK(rep.max_w == doctest::Approx(8.0));
  CHECK(rep.min_f == doctest::Approx(0.25));

  // Without an attack window the whole trace is scored.
  tr.attack_len = 0;
  const auto rep2 = fdia::compute_metrics(tr);
  CHECK(rep2.window_start == 0);
  CHECK(rep2.window_len == 4);
  CHECK(rep2.devmax_ref == doctest::Approx(50.0));
}

TEST_CASE("plan column tracks the attack schedule and holds its tail") {
  fdia::ScenarioConfig cfg;
  cfg.episode_len = 50;
  cfg.attack_start = 10;
  cfg.attack_len = 20;
  cfg.mode = fdia::Mode::defended;
  cfg.seed = 4;
  const auto res = fdia::run_episode(cfg);
  const auto& tr = res.trace;

  for (long k = 0; k < 10; ++k) {
    CHECK((tr.plan.row(k) - tr.ref.row(k)).norm() == 0.0);
    CHECK(tr.a.row(k).cwiseAbs().maxCoeff() == 0.0);
  }
  // In-window rows walk the planned positions; the injection is live.
  CHECK((tr.plan.row(10) - tr.ref.row(10)).norm() == 0.0);  // plan starts at the hold
  CHECK(tr.delta.row(10).cwiseAbs().maxCoeff() ==
        doctest::Approx(tr.a.row(10).cwiseAbs().maxCoeff()));
  bool plan_moves = false;
  for (long k = 11; k < 30; ++k) {
    if ((tr.plan.row(k) - tr.ref.row(k)).norm() > 0.0) plan_moves = true;
  }
  CHECK(plan_moves);
  // After the window the final plan row and the last injection are held.
  for (long k = 30; k < 50; ++k) {
    CHECK((tr.plan.row(k) - tr.plan.row(29)).norm() == 0.0);
    CHECK((tr.a.row(k) - tr.a.row(29)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(tr.delta.row(k).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(tr.a.row(29).cwiseAbs().maxCoeff() > 0.0);
  CHECK(static_cast<long>(res.attack_diag.size()) == 20);
}
