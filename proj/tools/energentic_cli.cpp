// energentic: command-line driver for episodes, training, sweeps and
// policy comparisons. Exit status: 0 success, 2 configuration error,
// 3 I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "energentic/energentic.hpp"

namespace fs = std::filesystem;
using namespace energentic;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

struct SweepOptions {
  unsigned threads = 1;
  std::optional<std::string> e0;
  std::optional<std::string> t0;
};

RunConfig load_effective_config(const CommonOptions& opt) {
  RunConfig cfg = load_run_config(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.out_dir) cfg.output_dir = *opt.out_dir;
  return cfg;
}

std::shared_ptr<const QTable> load_table_checked(const std::string& path, const std::string& key,
                                                 const EnvironmentSpec& env) {
  if (path.empty()) throw ConfigError(key, "q_learning needs a trained table");
  if (!fs::is_regular_file(path)) throw ConfigError(key, "no trained table at '" + path + "'");
  return std::make_shared<const QTable>(load_qtable(path, env));
}

Policy build_policy(const RunConfig& cfg) {
  switch (cfg.policy.kind) {
    case PolicyKind::fixed_compute:
      return FixedComputePolicy{};
    case PolicyKind::greedy_harvest:
      return GreedyHarvestPolicy{};
    case PolicyKind::q_learning:
      return QLearningPolicy{load_table_checked(cfg.policy.table_path, "policy.table", cfg.environment),
                             cfg.policy.epsilon};
  }
  return FixedComputePolicy{};
}

json manifest(const std::string& command, const RunConfig& cfg, const std::string& policy,
              const json& artifacts) {
  return {{"command", command},
          {"config_digest", config_digest(cfg)},
          {"env_digest", digest(cfg.environment)},
          {"seed", cfg.seed},
          {"policy", policy},
          {"artifacts", artifacts}};
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

int cmd_run(const CommonOptions& opt) {
  const RunConfig cfg = load_effective_config(opt);
  const Policy policy = build_policy(cfg);
  const Trajectory traj =
      run_episode(cfg.environment, policy, cfg.init, cfg.seed, cfg.forecaster, cfg.modes);
  const MetricsReport report = compute_metrics(traj, cfg.environment.t_crit);

  const fs::path out = cfg.output_dir;
  write_text_file(out / "trajectory.csv", trajectory_csv(traj));
  write_json(out / "metrics.json", metrics_to_json(report));
  write_text_file(out / "heatmap.csv", heatmap_csv(heatmap_channels(traj, cfg.environment)));
  json m = manifest("run", cfg, describe(policy),
                    {{"trajectory", "trajectory.csv"},
                     {"metrics", "metrics.json"},
                     {"heatmap", "heatmap.csv"}});
  m["termination"] = {{"cause", to_string(traj.cause)}, {"final_step", traj.final_state.step}};
  m["viability_channel"] =
      "substituted quantity: EAS of the episode prefix ending at each step, clamped to [0,1]";
  write_json(out / "manifest.json", m);
  std::cout << "run: lifespan " << traj.lifespan() << " (" << to_string(traj.cause)
            << "), EAS " << format_float(report.eas) << "\n";
  return kExitOk;
}

int cmd_train(const CommonOptions& opt) {
  const RunConfig cfg = load_effective_config(opt);
  if (cfg.policy.kind != PolicyKind::q_learning)
    throw ConfigError("policy.type", "train requires a q_learning policy");
  const TrainingResult result = train(cfg.environment, cfg.reward, cfg.training, cfg.seed);

  const fs::path out = cfg.output_dir;
  write_json(out / "qtable.json", qtable_to_json(result.table));
  write_text_file(out / "training_log.csv", training_log_csv(result.log));
  write_json(out / "manifest.json",
             manifest("train", cfg, "q_learning",
                      {{"qtable", "qtable.json"}, {"training_log", "training_log.csv"}}));
  std::cout << "train: " << result.log.size() << " episodes, final length "
            << result.log.back().length << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonOptions& opt, const SweepOptions& sweep) {
  RunConfig cfg = load_effective_config(opt);
  SweepRanges ranges;
  if (cfg.sweep) ranges = *cfg.sweep;
  if (!cfg.sweep && (!sweep.e0 || !sweep.t0))
    throw ConfigError("sweep", "no sweep ranges in config or on the command line");
  if (sweep.e0) ranges.e0 = parse_range_spec(*sweep.e0, "--e0");
  if (sweep.t0) ranges.t0 = parse_range_spec(*sweep.t0, "--t0");
  cfg.sweep = ranges;

  const Policy policy = build_policy(cfg);
  const auto e0 = linspace(ranges.e0.min, ranges.e0.max, ranges.e0.count, "sweep.e0");
  const auto t0 = linspace(ranges.t0.min, ranges.t0.max, ranges.t0.count, "sweep.t0");
  const HorizonMap map = sweep_horizon_map(cfg.environment, policy, cfg.init.x, cfg.init.y, e0, t0,
                                           cfg.seed, sweep.threads);

  const fs::path out = cfg.output_dir;
  write_text_file(out / "horizon_map.csv", horizon_map_csv(map));
  // Thread count is deliberately absent: it must not change any artifact.
  write_json(out / "manifest.json",
             manifest("sweep", cfg, describe(policy), {{"horizon_map", "horizon_map.csv"}}));
  std::cout << "sweep: " << t0.size() << "x" << e0.size() << " map written\n";
  return kExitOk;
}

int cmd_compare(const CommonOptions& opt) {
  const RunConfig cfg = load_effective_config(opt);
  std::string table_path = cfg.compare_table.value_or("");
  if (table_path.empty() && cfg.policy.kind == PolicyKind::q_learning)
    table_path = cfg.policy.table_path;
  const auto table = load_table_checked(table_path, "compare.table", cfg.environment);

  const Policy fixed = FixedComputePolicy{};
  const Policy greedy = GreedyHarvestPolicy{};
  const Policy survival = QLearningPolicy{table, 0.0};
  const auto run = [&](const Policy& p) {
    return run_episode(cfg.environment, p, cfg.init, cfg.seed, cfg.forecaster, cfg.modes);
  };
  const Trajectory tf = run(fixed);
  const Trajectory tg = run(greedy);
  const Trajectory ts = run(survival);

  const fs::path out = cfg.output_dir;
  write_text_file(out / "compare_energy.csv",
                  energy_comparison_csv({"fixed", "greedy", "survival"}, {&tf, &tg, &ts}));
  json metrics = {{"fixed", metrics_to_json(compute_metrics(tf, cfg.environment.t_crit))},
                  {"greedy", metrics_to_json(compute_metrics(tg, cfg.environment.t_crit))},
                  {"survival", metrics_to_json(compute_metrics(ts, cfg.environment.t_crit))}};
  write_json(out / "compare_metrics.json", metrics);
  write_json(out / "manifest.json",
             manifest("compare", cfg, "fixed_compute,greedy_harvest,q_learning(epsilon=0)",
                      {{"energy", "compare_energy.csv"}, {"metrics", "compare_metrics.json"}}));
  std::cout << "compare: lifespans fixed=" << tf.lifespan() << " greedy=" << tg.lifespan()
            << " survival=" << ts.lifespan() << "\n";
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "Run configuration (JSON)")->required();
  cmd->add_option("--out", opt.out_dir, "Output directory (overrides config)");
  cmd->add_option("--seed", opt.seed, "Seed (overrides config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy- and heat-constrained gridworld agent simulator"};
  app.require_subcommand(1);

  CommonOptions run_opt, train_opt, sweep_opt, compare_opt;
  SweepOptions sweep_extra;
  auto* run = app.add_subcommand("run", "Run one episode and write trajectory, metrics, heatmap");
  add_common(run, run_opt);
  auto* tr = app.add_subcommand("train", "Train the Q-learning survival policy");
  add_common(tr, train_opt);
  auto* sw = app.add_subcommand("sweep", "Lifespan map over initial energy and temperature");
  add_common(sw, sweep_opt);
  sw->add_option("--threads", sweep_extra.threads, "Worker threads")->check(CLI::PositiveNumber);
  sw->add_option("--e0", sweep_extra.e0, "Initial energy range min:max:count");
  sw->add_option("--t0", sweep_extra.t0, "Initial temperature range min:max:count");
  auto* cmp = app.add_subcommand("compare", "Energy series of the three policies");
  add_common(cmp, compare_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (tr->parsed()) return cmd_train(train_opt);
    if (sw->parsed()) return cmd_sweep(sweep_opt, sweep_extra);
    if (cmp->parsed()) return cmd_compare(compare_opt);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BoundsError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UsageError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}
