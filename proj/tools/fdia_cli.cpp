// Command line front end: run episodes, print calibration constants,
// benchmark the attacker, compare the three deployment modes.
#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdia/csv.hpp"
#include "fdia/episode.hpp"
#include "fdia/loop.hpp"
#include "fdia/metrics.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string mode_str;
  std::int64_t seed = -1;
  bool seed_set = false;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "config file (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  sub->add_option("--mode", args.mode_str, "u | po | d (overrides the config)");
  sub->add_option("--seed", args.seed, "RNG seed (overrides the config)")
      ->check(CLI::NonNegativeNumber);
}

fdia::ScenarioConfig resolve_config(const CommonArgs& args, const CLI::App* sub) {
  fdia::ScenarioConfig cfg;
  if (!args.config_path.empty()) cfg = fdia::load_config(args.config_path);
  if (!args.mode_str.empty()) cfg.mode = fdia::mode_from_string(args.mode_str);
  if (sub->count("--seed") > 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  fdia::validate(cfg);
  return cfg;
}

void print_metrics(const fdia::MetricReport& m) {
  std::printf("window_start = %ld\n", m.window_start);
  std::printf("window_len = %ld\n", m.window_len);
  std::printf("devmax_plan = %.10g\n", m.devmax_plan);
  std::printf("devrms_plan = %.10g\n", m.devrms_plan);
  std::printf("devmax_ref = %.10g\n", m.devmax_ref);
  std::printf("devrms_ref = %.10g\n", m.devrms_ref);
  std::printf("mean_u_norm = %.10g\n", m.mean_u_norm);
  std::printf("alarm_count = %ld\n", m.alarm_count);
  std::printf("max_w = %.10g\n", m.max_w);
  std::printf("min_f = %.10g\n", m.min_f);
  if (!m.finite) {
    std::printf("first_nonfinite = %ld\n", m.first_nonfinite);
  }
}

int cmd_run(const CommonArgs& args, const CLI::App* sub, const std::string& out_dir) {
  const auto cfg = resolve_config(args, sub);
  const auto res = fdia::run_episode(cfg);
  const auto metrics = fdia::compute_metrics(res.trace);

  std::printf("mode = %s\n", fdia::to_string(cfg.mode).c_str());
  std::printf("seed = %" PRIu64 "\n", cfg.seed);
  std::printf("steps = %ld\n", res.trace.steps);
  std::printf("tau = %.10g\n", res.tau);
  if (cfg.attack_len > 0) std::printf("tau_prime = %.10g\n", res.tau_prime);
  print_metrics(metrics);

  fs::create_directories(out_dir);
  const std::string stem = fdia::to_string(cfg.mode) + "_seed" + std::to_string(cfg.seed);
  const auto trace_path = fs::path(out_dir) / ("trace_" + stem + ".csv");
  const auto metrics_path = fs::path(out_dir) / ("metrics_" + stem + ".csv");
  fdia::write_trace_csv(res.trace, trace_path.string());
  fdia::write_metrics_csv({{fdia::to_string(cfg.mode), metrics}}, metrics_path.string());
  std::printf("trace = %s\n", trace_path.string().c_str());
  std::printf("metrics = %s\n", metrics_path.string().c_str());
  return 0;
}

int cmd_calibrate(const CommonArgs& args, const CLI::App* sub) {
  const auto cfg = resolve_config(args, sub);
  const auto ctx = fdia::build_context(cfg);
  const int p = ctx.model.p();

  std::printf("p = %d\n", p);
  std::printf("window = %d\n", ctx.detector_window);
  std::printf("alpha = %.10g\n", 1.0 / cfg.detector_arl);
  std::printf("tau = %.10g\n", ctx.tau);
  if (cfg.attack_len > 0) {
    std::printf("tau_prime = %.10g\n", ctx.tau / static_cast<double>(cfg.attack_len));
  }
  std::printf("z_x = %.10g\n", ctx.law.z_x);
  std::printf("z_scale = %.10g\n", ctx.law.z_scale);
  const auto [kp, kd] = fdia::lqr_gains(cfg.ts, cfg.lqr_w_pos, cfg.lqr_w_vel, cfg.lqr_w_u);
  std::printf("kp = %.10g\n", kp);
  std::printf("kd = %.10g\n", kd);
  std::printf("rho_closed = %.10g\n", ctx.kf.rho_closed);
  std::printf("sigma_trace = %.10g\n", ctx.kf.Sigma.trace());
  std::printf("jury_stable_at_full_gain = %d\n", int(fdia::jury_stable(kp, kd, cfg.ts, 1.0)));
  return 0;
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * double(v.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - double(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

int cmd_bench(const CommonArgs& args, const CLI::App* sub, const std::string& out_path) {
  const auto cfg = resolve_config(args, sub);
  if (cfg.attack_len <= 0) {
    throw std::invalid_argument("bench-attack needs attack_len > 0");
  }
  const auto res = fdia::run_episode(cfg);
  const auto& diag = res.attack_diag;

  std::vector<double> times;
  times.reserve(diag.size());
  long active = 0;
  double max_kkt = 0.0, max_budget = 0.0;
  for (const auto& d : diag) {
    times.push_back(d.solve_us);
    active += d.active ? 1 : 0;
    max_kkt = std::max(max_kkt, d.kkt_stat);
    max_budget = std::max(max_budget, d.budget_used);
  }
  double mean = 0.0;
  for (double t : times) mean += t;
  if (!times.empty()) mean /= double(times.size());

  std::printf("mode = %s\n", fdia::to_string(cfg.mode).c_str());
  std::printf("seed = %" PRIu64 "\n", cfg.seed);
  std::printf("solves = %zu\n", diag.size());
  std::printf("active_fraction = %.10g\n",
              diag.empty() ? 0.0 : double(active) / double(diag.size()));
  std::printf("solve_us_mean = %.10g\n", mean);
  std::printf("solve_us_p50 = %.10g\n", percentile(times, 0.50));
  std::printf("solve_us_p95 = %.10g\n", percentile(times, 0.95));
  std::printf("solve_us_max = %.10g\n", times.empty() ? 0.0 : *std::max_element(times.begin(), times.end()));
  std::printf("kkt_stat_max = %.10g\n", max_kkt);
  std::printf("budget_used_max = %.10g\n", max_budget);
  std::printf("tau_prime = %.10g\n", res.tau_prime);
  std::printf("step_halving_checks:\n");
  for (const auto& d : diag) {
    if (d.fd_halving_rel >= 0.0) {
      std::printf("  k = %ld  rel_change = %.10g\n", d.k, d.fd_halving_rel);
    }
  }

  if (!out_path.empty()) {
    std::FILE* f = std::fopen(out_path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    std::fprintf(f, "k,plan_idx,delta_norm,multiplier,active,budget_used,"
                    "kkt_stat,solve_us,fd_halving_rel\n");
    for (const auto& d : diag) {
      std::fprintf(f, "%ld,%ld,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g\n", d.k,
                   d.plan_idx, d.delta_norm, d.multiplier, int(d.active),
                   d.budget_used, d.kkt_stat, d.solve_us, d.fd_halving_rel);
    }
    std::fclose(f);
    std::printf("diag = %s\n", out_path.c_str());
  }
  return 0;
}

int cmd_compare(const CommonArgs& args, const CLI::App* sub, const std::string& out_dir) {
  auto base = resolve_config(args, sub);
  const fdia::Mode modes[] = {fdia::Mode::undefended, fdia::Mode::passive_only,
                              fdia::Mode::defended};
  std::vector<std::pair<std::string, fdia::MetricReport>> rows;
  for (const auto m : modes) {
    auto cfg = base;
    cfg.mode = m;
    const auto res = fdia::run_episode(cfg);
    rows.emplace_back(fdia::to_string(m), fdia::compute_metrics(res.trace));
  }

  std::printf("seed = %" PRIu64 "\n", base.seed);
  std::printf("%-14s %16s %16s %16s\n", "metric", rows[0].first.c_str(),
              rows[1].first.c_str(), rows[2].first.c_str());
  const auto line = [&](const char* name, auto get) {
    std::printf("%-14s %16.8g %16.8g %16.8g\n", name, get(rows[0].second),
                get(rows[1].second), get(rows[2].second));
  };
  line("devmax_plan", [](const fdia::MetricReport& m) { return m.devmax_plan; });
  line("devrms_plan", [](const fdia::MetricReport& m) { return m.devrms_plan; });
  line("devmax_ref", [](const fdia::MetricReport& m) { return m.devmax_ref; });
  line("devrms_ref", [](const fdia::MetricReport& m) { return m.devrms_ref; });
  line("mean_u_norm", [](const fdia::MetricReport& m) { return m.mean_u_norm; });
  line("alarm_count", [](const fdia::MetricReport& m) { return double(m.alarm_count); });
  line("max_w", [](const fdia::MetricReport& m) { return m.max_w; });
  line("min_f", [](const fdia::MetricReport& m) { return m.min_f; });

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const auto path = fs::path(out_dir) /
                      ("compare_seed" + std::to_string(base.seed) + ".csv");
    fdia::write_metrics_csv(rows, path.string());
    std::printf("metrics = %s\n", path.string().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stealthy sensor-attack co-simulation lab"};
  app.require_subcommand(1);

  CommonArgs run_args, cal_args, bench_args, cmp_args;
  std::string run_out = "out", bench_out, cmp_out;

  auto* run = app.add_subcommand("run", "run one episode and write its trace");
  add_common(run, run_args);
  run->add_option("--out", run_out, "output directory");

  auto* cal = app.add_subcommand("calibrate",
                                 "print thresholds and gains for a config");
  add_common(cal, cal_args);

  auto* bench = app.add_subcommand("bench-attack",
                                   "attacker solve timing and diagnostics");
  add_common(bench, bench_args);
  bench->add_option("--out", bench_out, "write per-step diagnostics CSV here");

  auto* cmp = app.add_subcommand("compare",
                                 "run all three modes on one seed");
  add_common(cmp, cmp_args);
  cmp->add_option("--out", cmp_out, "output directory for the metrics CSV");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run_args, run, run_out);
    if (cal->parsed()) return cmd_calibrate(cal_args, cal);
    if (bench->parsed()) return cmd_bench(bench_args, bench, bench_out);
    if (cmp->parsed()) return cmd_compare(cmp_args, cmp, cmp_out);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.get_exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
