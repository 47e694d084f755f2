#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fdia {

enum class Mode { undefended, passive_only, defended };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// Everything an episode needs, with working defaults. Units are noted per
// field; the same keys appear in the text config (see configs/default.cfg).
struct ScenarioConfig {
  // plant
  std::vector<double> chain_lengths{0.65, 0.55, 0.45, 0.45, 0.45, 0.45};  // m
  double ts = 0.01;       // s
  double qc = 1e-2;       // rad^2/s^3, acceleration noise density
  double r_blk = 1e-6;    // rad^2, per-joint measurement variance
  std::vector<double> q0; // rad; default set in the constructor

  // controller
  double lqr_w_pos = 1.0;
  double lqr_w_vel = 0.1;
  double lqr_w_u = 0.01;
  double rank_tol = 1e-10;

  // passive detector
  double detector_arl = 5000.0;  // mean samples between false alarms
  int detector_window = 20;

  // active defence. psi and gamma trade H0 actuation strength against how
  // early the scaling reacts within a sync window; the shipped values put the
  // engagement knee below the anomaly level a full-speed stealthy drag
  // produces between resyncs.
  double defence_psi = 0.7;
  double defence_beta = 0.999;
  double defence_gamma = 16.0;
  int defence_sync_period = 500;
  int defence_k_min = 5;
  double defence_ridge_rel = 1e-12;

  // attacker
  double attack_target_x = -2.0;  // m
  double attack_target_y = 1.0;   // m
  long attack_start = 800;        // step index
  long attack_len = 1200;         // steps; 0 disables the attacker
  double attacker_kp = 10.0;
  double attacker_kd = 6.0;
  double attacker_zeta = 1e-3;
  double attacker_fd_step = 1e-6;  // rad
  double attacker_relax = 0.2;     // unconstrained-fit step fraction, (0, 1]
  int attacker_models_defence = -1;  // -1 follow mode, 0 off, 1 on

  // episode
  long episode_len = 2000;
  std::uint64_t seed = 1;
  Mode mode = Mode::defended;
  long warmup = 0;  // unrecorded attack-free steps before the episode

  ScenarioConfig();
};

// Parses the flat key/value text format ('#' comments, '=' separator,
// whitespace-separated lists). Unknown or repeated keys are errors.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Range and consistency checks; throws std::invalid_argument with the
// offending key in the message.
void validate(const ScenarioConfig& cfg);

}  // namespace fdia
