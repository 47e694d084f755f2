#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fdia/csv.hpp"
#include "fdia/defence.hpp"
#include "fdia/detector.hpp"
#include "fdia/episode.hpp"
#include "fdia/gamma.hpp"
#include "fdia/loop.hpp"
#include "fdia/metrics.hpp"
#include "fdia/qcqp.hpp"
#include "fdia/quintic.hpp"

namespace py = pybind11;
using namespace fdia;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Co-simulation lab: planar arm, steady-state filter, windowed "
            "chi-square monitor, command-scaling defence, stealthy attacker";

  py::enum_<Mode>(m, "Mode")
      .value("undefended", Mode::undefended)
      .value("passive_only", Mode::passive_only)
      .value("defended", Mode::defended);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("chain_lengths", &ScenarioConfig::chain_lengths)
      .def_readwrite("ts", &ScenarioConfig::ts)
      .def_readwrite("qc", &ScenarioConfig::qc)
      .def_readwrite("r_blk", &ScenarioConfig::r_blk)
      .def_readwrite("q0", &ScenarioConfig::q0)
      .def_readwrite("lqr_w_pos", &ScenarioConfig::lqr_w_pos)
      .def_readwrite("lqr_w_vel", &ScenarioConfig::lqr_w_vel)
      .def_readwrite("lqr_w_u", &ScenarioConfig::lqr_w_u)
      .def_readwrite("rank_tol", &ScenarioConfig::rank_tol)
      .def_readwrite("detector_arl", &ScenarioConfig::detector_arl)
      .def_readwrite("detector_window", &ScenarioConfig::detector_window)
      .def_readwrite("defence_psi", &ScenarioConfig::defence_psi)
      .def_readwrite("defence_beta", &ScenarioConfig::defence_beta)
      .def_readwrite("defence_gamma", &ScenarioConfig::defence_gamma)
      .def_readwrite("defence_sync_period", &ScenarioConfig::defence_sync_period)
      .def_readwrite("defence_k_min", &ScenarioConfig::defence_k_min)
      .def_readwrite("defence_ridge_rel", &ScenarioConfig::defence_ridge_rel)
      .def_readwrite("attack_target_x", &ScenarioConfig::attack_target_x)
      .def_readwrite("attack_target_y", &ScenarioConfig::attack_target_y)
      .def_readwrite("attack_start", &ScenarioConfig::attack_start)
      .def_readwrite("attack_len", &ScenarioConfig::attack_len)
      .def_readwrite("attacker_kp", &ScenarioConfig::attacker_kp)
      .def_readwrite("attacker_kd", &ScenarioConfig::attacker_kd)
      .def_readwrite("attacker_zeta", &ScenarioConfig::attacker_zeta)
      .def_readwrite("attacker_fd_step", &ScenarioConfig::attacker_fd_step)
      .def_readwrite("attacker_relax", &ScenarioConfig::attacker_relax)
      .def_readwrite("attacker_models_defence", &ScenarioConfig::attacker_models_defence)
      .def_readwrite("episode_len", &ScenarioConfig::episode_len)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("mode", &ScenarioConfig::mode)
      .def_readwrite("warmup", &ScenarioConfig::warmup);

  m.def("load_config", &load_config, py::arg("path"));
  m.def("validate", &validate, py::arg("config"));

  m.def("reg_lower_gamma", &reg_lower_gamma, py::arg("a"), py::arg("x"));
  m.def("chi2_quantile", &chi2_quantile, py::arg("prob"), py::arg("dof"));
  m.def("calibrate_threshold", &calibrate_threshold, py::arg("alpha"),
        py::arg("p"), py::arg("window"));
  m.def("design_zx", &design_zx, py::arg("psi"), py::arg("n"));

  m.def(
      "solve_dare",
      [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
        return solve_dare(A, C, Q, R);
      },
      py::arg("A"), py::arg("C"), py::arg("Q"), py::arg("R"));
  m.def("lqr_gains", &lqr_gains, py::arg("ts"), py::arg("w_pos"),
        py::arg("w_vel"), py::arg("w_u"));
  m.def("jury_stable", &jury_stable, py::arg("kp"), py::arg("kd"),
        py::arg("ts"), py::arg("fbar"));

  py::class_<QuinticPlan>(m, "QuinticPlan")
      .def_readonly("pos", &QuinticPlan::pos)
      .def_readonly("vel", &QuinticPlan::vel)
      .def_readonly("acc", &QuinticPlan::acc);
  m.def("quintic_plan", &quintic_plan, py::arg("p0"), py::arg("p1"),
        py::arg("samples"), py::arg("ts"));

  py::class_<QcqpSolution>(m, "QcqpSolution")
      .def_readonly("delta", &QcqpSolution::delta)
      .def_readonly("multiplier", &QcqpSolution::multiplier)
      .def_readonly("active", &QcqpSolution::active)
      .def_readonly("iterations", &QcqpSolution::iterations)
      .def_readonly("constraint_value", &QcqpSolution::constraint_value);
  m.def(
      "solve_qcqp",
      [](const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
         const Eigen::MatrixXd& O, const Eigen::VectorXd& b, double c) {
        return solve_qcqp({H, g, O, b, c});
      },
      py::arg("H"), py::arg("g"), py::arg("O"), py::arg("b"), py::arg("c"));

  py::class_<EpisodeTrace>(m, "EpisodeTrace")
      .def_readonly("steps", &EpisodeTrace::steps)
      .def_readonly("dof", &EpisodeTrace::dof)
      .def_readonly("ts", &EpisodeTrace::ts)
      .def_readonly("attack_start", &EpisodeTrace::attack_start)
      .def_readonly("attack_len", &EpisodeTrace::attack_len)
      .def_readonly("mode", &EpisodeTrace::mode)
      .def_readonly("q", &EpisodeTrace::q)
      .def_readonly("qd", &EpisodeTrace::qd)
      .def_readonly("xhat", &EpisodeTrace::xhat)
      .def_readonly("xtilde", &EpisodeTrace::xtilde)
      .def_readonly("y", &EpisodeTrace::y)
      .def_readonly("ytilde", &EpisodeTrace::ytilde)
      .def_readonly("a", &EpisodeTrace::a)
      .def_readonly("delta", &EpisodeTrace::delta)
      .def_readonly("r", &EpisodeTrace::r)
      .def_readonly("u_nom", &EpisodeTrace::u_nom)
      .def_readonly("u", &EpisodeTrace::u)
      .def_readonly("z", &EpisodeTrace::z)
      .def_readonly("w", &EpisodeTrace::w)
      .def_readonly("ztilde", &EpisodeTrace::ztilde)
      .def_readonly("f", &EpisodeTrace::f)
      .def_readonly("alarm", &EpisodeTrace::alarm)
      .def_readonly("scored", &EpisodeTrace::scored)
      .def_readonly("resynced", &EpisodeTrace::resynced)
      .def_readonly("ee", &EpisodeTrace::ee)
      .def_readonly("ref", &EpisodeTrace::ref)
      .def_readonly("plan", &EpisodeTrace::plan);

  py::class_<AttackDiag>(m, "AttackDiag")
      .def_readonly("k", &AttackDiag::k)
      .def_readonly("plan_idx", &AttackDiag::plan_idx)
      .def_readonly("delta", &AttackDiag::delta)
      .def_readonly("delta_norm", &AttackDiag::delta_norm)
      .def_readonly("multiplier", &AttackDiag::multiplier)
      .def_readonly("active", &AttackDiag::active)
      .def_readonly("budget_used", &AttackDiag::budget_used)
      .def_readonly("kkt_stat", &AttackDiag::kkt_stat)
      .def_readonly("solve_us", &AttackDiag::solve_us)
      .def_readonly("fd_halving_rel", &AttackDiag::fd_halving_rel);

  py::class_<EpisodeResult>(m, "EpisodeResult")
      .def_readonly("trace", &EpisodeResult::trace)
      .def_readonly("attack_diag", &EpisodeResult::attack_diag)
      .def_readonly("tau", &EpisodeResult::tau)
      .def_readonly("tau_prime", &EpisodeResult::tau_prime)
      .def_readonly("z_x", &EpisodeResult::z_x)
      .def_readonly("kp", &EpisodeResult::kp)
      .def_readonly("kd", &EpisodeResult::kd);
  m.def("run_episode", &run_episode, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<MetricReport>(m, "MetricReport")
      .def_readonly("window_start", &MetricReport::window_start)
      .def_readonly("window_len", &MetricReport::window_len)
      .def_readonly("devmax_plan", &MetricReport::devmax_plan)
      .def_readonly("devrms_plan", &MetricReport::devrms_plan)
      .def_readonly("devmax_ref", &MetricReport::devmax_ref)
      .def_readonly("devrms_ref", &MetricReport::devrms_ref)
      .def_readonly("mean_u_norm", &MetricReport::mean_u_norm)
      .def_readonly("alarm_count", &MetricReport::alarm_count)
      .def_readonly("max_w", &MetricReport::max_w)
      .def_readonly("min_f", &MetricReport::min_f)
      .def_readonly("finite", &MetricReport::finite)
      .def_readonly("first_nonfinite", &MetricReport::first_nonfinite);
  m.def("compute_metrics", &compute_metrics, py::arg("trace"));

  m.def("write_trace_csv", &write_trace_csv, py::arg("trace"), py::arg("path"));
  m.def("read_trace_csv", &read_trace_csv, py::arg("path"));
}
