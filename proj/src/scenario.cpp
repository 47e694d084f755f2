#include "fdia/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fdia {

ScenarioConfig::ScenarioConfig() {
  q0 = {0.0, M_PI / 8, M_PI / 8, M_PI / 8, M_PI / 8, M_PI / 8};
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::undefended: return "undefended";
    case Mode::passive_only: return "passive";
    case Mode::defended: return "defended";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "undefended" || s == "u") return Mode::undefended;
  if (s == "passive" || s == "po") return Mode::passive_only;
  if (s == "defended" || s == "d") return Mode::defended;
  throw std::invalid_argument("mode: expected undefended|passive|defended, got '" + s + "'");
}

namespace {

std::vector<double> parse_doubles(const std::string& key, const std::string& value) {
  std::istringstream iss(value);
  std::vector<double> out;
  double d;
  while (iss >> d) out.push_back(d);
  if (!iss.eof()) {
    throw std::invalid_argument("config: key '" + key + "' has a non-numeric entry");
  }
  if (out.empty()) {
    throw std::invalid_argument("config: key '" + key + "' has no value");
  }
  return out;
}

double parse_scalar(const std::string& key, const std::string& value) {
  const auto v = parse_doubles(key, value);
  if (v.size() != 1) {
    throw std::invalid_argument("config: key '" + key + "' expects a single value");
  }
  return v[0];
}

long parse_long(const std::string& key, const std::string& value) {
  const double d = parse_scalar(key, value);
  const long l = static_cast<long>(std::llround(d));
  if (static_cast<double>(l) != d) {
    throw std::invalid_argument("config: key '" + key + "' expects an integer");
  }
  return l;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::map<std::string, std::string> kv;
  std::istringstream iss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(iss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " has an empty key");
    }
    if (!kv.emplace(key, value).second) {
      throw std::invalid_argument("config: key '" + key + "' given twice");
    }
  }

  for (const auto& [key, value] : kv) {
    if (key == "chain_lengths") cfg.chain_lengths = parse_doubles(key, value);
    else if (key == "ts") cfg.ts = parse_scalar(key, value);
    else if (key == "qc") cfg.qc = parse_scalar(key, value);
    else if (key == "r_blk") cfg.r_blk = parse_scalar(key, value);
    else if (key == "q0") cfg.q0 = parse_doubles(key, value);
    else if (key == "lqr_w_pos") cfg.lqr_w_pos = parse_scalar(key, value);
    else if (key == "lqr_w_vel") cfg.lqr_w_vel = parse_scalar(key, value);
    else if (key == "lqr_w_u") cfg.lqr_w_u = parse_scalar(key, value);
    else if (key == "rank_tol") cfg.rank_tol = parse_scalar(key, value);
    else if (key == "detector_arl") cfg.detector_arl = parse_scalar(key, value);
    else if (key == "detector_window") cfg.detector_window = static_cast<int>(parse_long(key, value));
    else if (key == "defence_psi") cfg.defence_psi = parse_scalar(key, value);
    else if (key == "defence_beta") cfg.defence_beta = parse_scalar(key, value);
    else if (key == "defence_gamma") cfg.defence_gamma = parse_scalar(key, value);
    else if (key == "defence_sync_period") cfg.defence_sync_period = static_cast<int>(parse_long(key, value));
    else if (key == "defence_k_min") cfg.defence_k_min = static_cast<int>(parse_long(key, value));
    else if (key == "defence_ridge_rel") cfg.defence_ridge_rel = parse_scalar(key, value);
    else if (key == "attack_target") {
      const auto v = parse_doubles(key, value);
      if (v.size() != 2) {
        throw std::invalid_argument("config: attack_target expects two values");
      }
      cfg.attack_target_x = v[0];
      cfg.attack_target_y = v[1];
    }
    else if (key == "attack_start") cfg.attack_start = parse_long(key, value);
    else if (key == "attack_len") cfg.attack_len = parse_long(key, value);
    else if (key == "attacker_kp") cfg.attacker_kp = parse_scalar(key, value);
    else if (key == "attacker_kd") cfg.attacker_kd = parse_scalar(key, value);
    else if (key == "attacker_zeta") cfg.attacker_zeta = parse_scalar(key, value);
    else if (key == "attacker_fd_step") cfg.attacker_fd_step = parse_scalar(key, value);
    else if (key == "attacker_relax") cfg.attacker_relax = parse_scalar(key, value);
    else if (key == "attacker_models_defence") {
      if (value == "auto") cfg.attacker_models_defence = -1;
      else if (value == "off") cfg.attacker_models_defence = 0;
      else if (value == "on") cfg.attacker_models_defence = 1;
      else throw std::invalid_argument("config: attacker_models_defence expects auto|off|on");
    }
    else if (key == "episode_len") cfg.episode_len = parse_long(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
    else if (key == "mode") cfg.mode = mode_from_string(value);
    else if (key == "warmup") cfg.warmup = parse_long(key, value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate(const ScenarioConfig& cfg) {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
  };
  if (cfg.chain_lengths.empty()) fail("chain_lengths must not be empty");
  for (double l : cfg.chain_lengths) {
    if (!(l > 0.0)) fail("chain_lengths entries must be positive");
  }
  if (cfg.q0.size() != cfg.chain_lengths.size()) {
    fail("q0 must match chain_lengths in length");
  }
  if (!(cfg.ts > 0.0)) fail("ts must be positive");
  if (!(cfg.qc > 0.0)) fail("qc must be positive");
  if (!(cfg.r_blk > 0.0)) fail("r_blk must be positive");
  if (!(cfg.lqr_w_pos > 0.0)) fail("lqr_w_pos must be positive");
  if (cfg.lqr_w_vel < 0.0) fail("lqr_w_vel must be >= 0");
  if (!(cfg.lqr_w_u > 0.0)) fail("lqr_w_u must be positive");
  if (!(cfg.rank_tol >= 0.0)) fail("rank_tol must be >= 0");
  if (!(cfg.detector_arl > 1.0)) fail("detector_arl must be > 1");
  if (cfg.detector_window < 1) fail("detector_window must be >= 1");
  if (!(cfg.defence_psi > 0.0 && cfg.defence_psi < 1.0)) fail("defence_psi must lie in (0,1)");
  if (!(cfg.defence_beta > 0.0 && cfg.defence_beta < 1.0)) fail("defence_beta must lie in (0,1)");
  if (!(cfg.defence_gamma > 0.0)) fail("defence_gamma must be positive");
  if (cfg.defence_sync_period < 2) fail("defence_sync_period must be >= 2");
  if (cfg.defence_k_min < 1) fail("defence_k_min must be >= 1");
  if (!(cfg.defence_ridge_rel >= 0.0)) fail("defence_ridge_rel must be >= 0");
  if (cfg.attack_start < 0) fail("attack_start must be >= 0");
  if (cfg.attack_len < 0) fail("attack_len must be >= 0");
  if (cfg.attack_len == 1) fail("attack_len must be 0 or >= 2");
  if (cfg.attack_len > 0 &&
      cfg.attack_start + cfg.attack_len > cfg.episode_len) {
    fail("attack window must fit inside the episode");
  }
  if (!(cfg.attacker_zeta > 0.0)) fail("attacker_zeta must be positive");
  if (!(cfg.attacker_fd_step > 0.0)) fail("attacker_fd_step must be positive");
  if (!(cfg.attacker_relax > 0.0 && cfg.attacker_relax <= 1.0)) {
    fail("attacker_relax must be in (0, 1]");
  }
  if (cfg.episode_len < 1) fail("episode_len must be >= 1");
  if (cfg.warmup < 0) fail("warmup must be >= 0");
}

}  // namespace fdia
