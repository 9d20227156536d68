#include <gtest/gtest.h>

#include "energentic/simulation.hpp"

using namespace energentic;

namespace {

AgentState state(int x, int y, double energy, double temperature) {
  return {x, y, energy, temperature, std::nullopt, 0};
}

EnvironmentSpec static_world() {
  EnvironmentSpec s;
  s.width = 3;
  s.height = 3;
  s.harvest_field = FieldSpec::constant(0.37);
  s.dissipation_field = FieldSpec::constant(3.6);
  s.action_costs.compute = 0.25;
  return s;
}

EnvironmentSpec hotspot_world() {
  EnvironmentSpec s;
  s.width = 5;
  s.height = 5;
  s.harvest_field = {{GaussianHotspots{{Hotspot{2, 2, 1.0, 1.0}}}}, SinusoidalTemporal{20.0, 0.3}};
  s.dissipation_field = {{ConstantField{0.4}, GaussianHotspots{{Hotspot{2, 2, 2.1, 1.0}}}},
                         StaticTemporal{}};
  return s;
}

}  // namespace

TEST(Modes, Classification) {
  const EnvironmentSpec s;
  EXPECT_EQ(classify_mode(state(0, 0, 5.0, 20.0), Action::idle(), s), Mode::dormant);
  EXPECT_EQ(classify_mode(state(0, 0, 0.25, 20.0), Action::compute(), s), Mode::degraded);  // 5%
  EXPECT_EQ(classify_mode(state(0, 0, 4.0, 21.0), Action::compute(), s), Mode::active);    // 80%
  EXPECT_EQ(classify_mode(state(0, 0, 4.0, 36.5), Action::move(Direction::north), s),
            Mode::degraded);  // above 20 + 0.8 * 20
  EXPECT_EQ(classify_mode(state(0, 0, 0.25, 39.0), Action::idle(), s), Mode::dormant);
  EXPECT_THROW(validate(ModeThresholds{0.0, 0.5}), ConfigError);
}

TEST(Episode, ZeroCostIdleWorldSurvivesToCap) {
  EnvironmentSpec s;
  s.action_costs = {0.0, 0.0, 0.0};
  s.harvest_field = FieldSpec::constant(0.0);
  s.max_steps = 50;
  const auto t = run_episode(s, GreedyHarvestPolicy{}, {1, 1, 1.0, 20.0}, 1);
  EXPECT_EQ(t.lifespan(), 50);
  EXPECT_EQ(t.cause, TerminalCause::max_steps);
  for (double v : euf_series(t)) EXPECT_EQ(v, 0.0);
  const auto r = compute_metrics(t, s.t_crit);
  EXPECT_EQ(r.evs, 0.0);
  EXPECT_EQ(r.eas, 0.0);
  for (const auto& row : heatmap_channels(t, s)) EXPECT_EQ(row.viability, 0.0);
  for (const auto& st : t.steps) EXPECT_EQ(st.mode, Mode::dormant);
}

TEST(Episode, ImmediateOverheat) {
  auto s = static_world();
  s.dissipation_field = FieldSpec::constant(1.0);
  // threshold t_crit - alpha*h + beta*D = 40 - 2 + 0.5 = 38.5
  EXPECT_EQ(run_episode(s, FixedComputePolicy{}, {1, 1, 2.0, 38.6}, 0).lifespan(), 1);
  EXPECT_EQ(run_episode(s, FixedComputePolicy{}, {1, 1, 2.0, 38.6}, 0).cause,
            TerminalCause::overheated);
  EXPECT_GT(run_episode(s, FixedComputePolicy{}, {1, 1, 2.0, 38.4}, 0).lifespan(), 1);
}

TEST(Episode, ReplayClosure) {
  const auto s = hotspot_world();
  const auto t = run_episode(s, GreedyHarvestPolicy{}, {0, 4, 1.0, 20.0}, 3);
  ASSERT_GT(t.lifespan(), 2);
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& r = t.steps[i];
    const double p = potential_at(s, r.x, r.y, r.step);
    const double d = dissipation_at(s, r.x, r.y, r.step);
    EXPECT_NEAR(step_energy(r.energy, p, r.action, s).e_next, t.energy_after(i), 1e-12);
    EXPECT_NEAR(step_thermal(r.temperature, r.action, d, s), t.temperature_after(i), 1e-12);
    EXPECT_EQ(r.step, static_cast<int>(i));
  }
  EXPECT_EQ(t.final_state.step, t.lifespan());
}

TEST(Episode, Deterministic) {
  const auto s = hotspot_world();
  EnvironmentSpec train_env = s;
  train_env.max_steps = 40;
  TrainingConfig cfg;
  cfg.episodes = 100;
  cfg.init = {0, 0, 1.0, 20.0};
  auto table = std::make_shared<const QTable>(train(train_env, {}, cfg, 9).table);
  const Policy p = QLearningPolicy{table, 0.2};
  const auto a = run_episode(s, p, cfg.init, 77);
  const auto b = run_episode(s, p, cfg.init, 77);
  ASSERT_EQ(a.lifespan(), b.lifespan());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    EXPECT_EQ(a.steps[i].action, b.steps[i].action);
    EXPECT_EQ(a.steps[i].energy, b.steps[i].energy);
    EXPECT_EQ(a.steps[i].forecast, b.steps[i].forecast);
  }
}

TEST(Episode, InvalidInitIsConfigError) {
  EXPECT_THROW(run_episode(static_world(), FixedComputePolicy{}, {5, 0, 1.0, 20.0}, 0), ConfigError);
  EXPECT_THROW(run_episode(static_world(), FixedComputePolicy{}, {0, 0, 1.0, 10.0}, 0), ConfigError);
}

TEST(Heatmap, Endpoints) {
  const auto s = static_world();
  const auto t = run_episode(s, FixedComputePolicy{}, {1, 1, s.energy_cap, s.t_ambient}, 0);
  const auto rows = heatmap_channels(t, s);
  ASSERT_EQ(rows.size(), t.steps.size() + 1);
  EXPECT_DOUBLE_EQ(rows.front().energy, 1.0);
  EXPECT_DOUBLE_EQ(rows.front().temperature, 0.0);
  for (const auto& r : rows) {
    EXPECT_GE(r.viability, 0.0);
    EXPECT_LE(r.viability, 1.0);
  }
  auto hot = s;
  hot.dissipation_field = FieldSpec::constant(0.0);
  const auto th = run_episode(hot, FixedComputePolicy{}, {1, 1, 4.0, 35.0}, 0);
  ASSERT_EQ(th.cause, TerminalCause::overheated);
  EXPECT_DOUBLE_EQ(heatmap_channels(th, hot).back().temperature, 1.0);
}

TEST(Heatmap, ViabilityIsPrefixEas) {
  const auto s = hotspot_world();
  const auto t = run_episode(s, GreedyHarvestPolicy{}, {0, 0, 1.0, 20.0}, 0);
  const auto rows = heatmap_channels(t, s);
  Trajectory whole = t;
  const auto full = compute_metrics(whole, s.t_crit);
  EXPECT_NEAR(rows[t.steps.size() - 1].viability, std::clamp(full.eas, 0.0, 1.0), 1e-12);
  EXPECT_EQ(rows.back().viability, rows[t.steps.size() - 1].viability);
}

TEST(Sweep, SingleCellIsOneEpisode) {
  const auto s = static_world();
  const auto m = sweep_horizon_map(s, FixedComputePolicy{}, 1, 1, {1.3}, {24.0}, 5);
  ASSERT_EQ(m.cells.size(), 1u);
  EXPECT_EQ(m.cells[0][0],
            run_episode(s, FixedComputePolicy{}, {1, 1, 1.3, 24.0}, 5).lifespan());
}

TEST(Sweep, MonotoneForOpenLoopPolicy) {
  const auto s = static_world();
  const auto e0 = linspace(0.25, 5.0, 20, "e0");
  const auto t0 = linspace(20.0, 39.0, 20, "t0");
  const auto m = sweep_horizon_map(s, FixedComputePolicy{}, 1, 1, e0, t0, 0);
  int max_jump = 0;
  for (std::size_t i = 0; i < t0.size(); ++i)
    for (std::size_t j = 0; j < e0.size(); ++j) {
      if (j + 1 < e0.size()) {
        EXPECT_LE(m.cells[i][j], m.cells[i][j + 1]);
        max_jump = std::max(max_jump, m.cells[i][j + 1] - m.cells[i][j]);
      }
      if (i + 1 < t0.size()) {
        EXPECT_GE(m.cells[i][j], m.cells[i + 1][j]);
      }
    }
  EXPECT_GE(max_jump, 5);
}

TEST(Sweep, ThreadCountDoesNotMatter) {
  const auto s = hotspot_world();
  const auto e0 = linspace(0.5, 4.0, 7, "e0");
  const auto t0 = linspace(20.0, 36.0, 5, "t0");
  const auto serial = sweep_horizon_map(s, GreedyHarvestPolicy{}, 0, 0, e0, t0, 3, 1);
  for (unsigned n : {2u, 4u, 64u}) {
    const auto parallel = sweep_horizon_map(s, GreedyHarvestPolicy{}, 0, 0, e0, t0, 3, n);
    EXPECT_EQ(serial.cells, parallel.cells);
  }
}

TEST(Sweep, AxisErrors) {
  const auto s = static_world();
  EXPECT_THROW(linspace(1.0, 1.0, 3, "k"), ConfigError);
  EXPECT_THROW(linspace(0.0, 1.0, 0, "k"), ConfigError);
  EXPECT_THROW(sweep_horizon_map(s, FixedComputePolicy{}, 1, 1, {}, {20.0}, 0), ConfigError);
  EXPECT_THROW(sweep_horizon_map(s, FixedComputePolicy{}, 1, 1, {2.0, 1.0}, {20.0}, 0),
               ConfigError);
  EXPECT_THROW(sweep_horizon_map(s, FixedComputePolicy{}, 1, 1, {1.0}, {20.0, 45.0}, 0, 4),
               ConfigError);
}
