#include <gtest/gtest.h>

#include <random>

#include "energentic/dynamics.hpp"

using namespace energentic;

namespace {

EnvironmentSpec flat_world(double harvest, double dissipation) {
  EnvironmentSpec s;
  s.width = 4;
  s.height = 3;
  s.harvest_field = FieldSpec::constant(harvest);
  s.dissipation_field = FieldSpec::constant(dissipation);
  return s;
}

}  // namespace

TEST(StepEnergy, ZeroHarvestZeroCost) {
  EnvironmentSpec s;
  s.eta = 0.0;
  s.action_costs.idle = 0.0;
  const auto r = step_energy(1.0, 0.7, Action::idle(), s);
  EXPECT_DOUBLE_EQ(r.e_next, 1.0);
  EXPECT_DOUBLE_EQ(r.e_in, 0.0);
  EXPECT_DOUBLE_EQ(r.e_out, 0.0);
}

TEST(StepEnergy, HandSubstitution) {
  EnvironmentSpec s;
  s.eta = 1.0;
  s.gain_factors.idle = 1.0;
  s.action_costs.idle = 0.2;
  const auto r = step_energy(1.0, 0.5, Action::idle(), s);
  EXPECT_NEAR(r.e_next, 1.3, 1e-12);
  EXPECT_NEAR(r.e_in, 0.5, 1e-12);
  EXPECT_NEAR(r.e_out, 0.2, 1e-12);
}

TEST(StepEnergy, LinearInEnergy) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  const EnvironmentSpec s;
  for (int i = 0; i < 200; ++i) {
    const double e = u(gen), d = u(gen), p = u(gen);
    for (const auto& a : kAllActions) {
      const double base = step_energy(e, p, a, s).e_next;
      EXPECT_NEAR(step_energy(e + d, p, a, s).e_next, base + d, 1e-12);
    }
  }
}

TEST(StepEnergy, MonotoneInHarvest) {
  const EnvironmentSpec s;
  for (const auto& a : kAllActions) {
    double prev = -1e300;
    for (double p = 0.0; p <= 3.0; p += 0.25) {
      const double v = step_energy(1.0, p, a, s).e_next;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(StepThermal, Adiabatic) {
  EnvironmentSpec s;
  s.alpha = 0.0;
  s.beta = 0.0;
  for (const auto& a : kAllActions) EXPECT_DOUBLE_EQ(step_thermal(25.0, a, 3.0, s), 25.0);
}

TEST(StepThermal, GenerationBalancesDissipation) {
  EnvironmentSpec s;
  s.alpha = 1.0;
  s.beta = 0.5;
  s.action_heat.compute = 2.0;
  EXPECT_DOUBLE_EQ(step_thermal(30.0, Action::compute(), 4.0, s), 30.0);
}

TEST(StepThermal, HandSubstitution) {
  EnvironmentSpec s;
  s.alpha = 1.0;
  s.beta = 0.5;
  s.t_ambient = 20.0;
  s.action_heat.compute = 2.0;
  EXPECT_NEAR(step_thermal(20.0, Action::compute(), 1.0, s), 21.5, 1e-12);
}

TEST(StepThermal, FloorsAtAmbient) {
  EnvironmentSpec s;
  s.t_ambient = 20.0;
  s.beta = 0.5;
  s.action_heat.idle = 0.0;
  EXPECT_DOUBLE_EQ(step_thermal(20.3, Action::idle(), 10.0, s), 20.0);
}

TEST(ApplyAction, NullDynamics) {
  auto s = flat_world(0.0, 0.0);
  s.action_costs.idle = 0.0;
  const AgentState st{2, 1, 0.8, 23.0, std::nullopt, 4};
  const auto out = apply_action(st, Action::idle(), s);
  EXPECT_EQ(out.next_state.x, 2);
  EXPECT_EQ(out.next_state.y, 1);
  EXPECT_DOUBLE_EQ(out.next_state.energy, 0.8);
  EXPECT_DOUBLE_EQ(out.next_state.temperature, 23.0);
  EXPECT_EQ(out.next_state.step, 5);
  EXPECT_FALSE(out.terminal);
}

TEST(ApplyAction, ComputeDepletesToNegativeEnergy) {
  auto s = flat_world(0.0, 1.0);
  s.action_costs.compute = 0.5;
  const AgentState st{0, 0, 0.1, 20.0, std::nullopt, 0};
  const auto out = apply_action(st, Action::compute(), s);
  ASSERT_TRUE(out.terminal);
  EXPECT_EQ(*out.terminal, TerminalCause::energy_depleted);
  EXPECT_NEAR(out.next_state.energy, -0.4, 1e-12);
}

TEST(ApplyAction, DepletionWinsOverOverheat) {
  auto s = flat_world(0.0, 0.0);
  s.action_costs.compute = 0.5;
  const AgentState st{0, 0, 0.1, 39.5, std::nullopt, 0};
  const auto out = apply_action(st, Action::compute(), s);
  ASSERT_TRUE(out.terminal);
  EXPECT_EQ(*out.terminal, TerminalCause::energy_depleted);
}

TEST(ApplyAction, Overheat) {
  auto s = flat_world(1.0, 0.0);
  const AgentState st{0, 0, 2.0, 39.0, std::nullopt, 0};
  const auto out = apply_action(st, Action::compute(), s);
  ASSERT_TRUE(out.terminal);
  EXPECT_EQ(*out.terminal, TerminalCause::overheated);
}

TEST(ApplyAction, StepCap) {
  auto s = flat_world(1.0, 1.0);
  s.max_steps = 3;
  AgentState st{0, 0, 1.0, 20.0, std::nullopt, 2};
  const auto out = apply_action(st, Action::idle(), s);
  ASSERT_TRUE(out.terminal);
  EXPECT_EQ(*out.terminal, TerminalCause::max_steps);
}

TEST(ApplyAction, MoveClampsAtEdgeAndChargesCost) {
  auto s = flat_world(0.0, 1.0);
  const AgentState st{s.width - 1, 1, 1.0, 20.0, std::nullopt, 0};
  const auto out = apply_action(st, Action::move(Direction::east), s);
  EXPECT_EQ(out.next_state.x, s.width - 1);
  EXPECT_EQ(out.next_state.y, 1);
  EXPECT_NEAR(out.next_state.energy, 1.0 - s.action_costs.move, 1e-12);
}

TEST(ApplyAction, MoveDirections) {
  auto s = flat_world(0.0, 1.0);
  const AgentState st{1, 1, 1.0, 20.0, std::nullopt, 0};
  const auto at = [&](Direction d) {
    const auto n = apply_action(st, Action::move(d), s).next_state;
    return std::pair{n.x, n.y};
  };
  EXPECT_EQ(at(Direction::north), (std::pair{1, 0}));
  EXPECT_EQ(at(Direction::south), (std::pair{1, 2}));
  EXPECT_EQ(at(Direction::east), (std::pair{2, 1}));
  EXPECT_EQ(at(Direction::west), (std::pair{0, 1}));
}

TEST(ApplyAction, FieldsSampledAtPreMoveCell) {
  EnvironmentSpec s;
  s.width = 3;
  s.height = 1;
  s.eta = 1.0;
  s.gain_factors.move = 1.0;
  s.harvest_field = {{LinearGradient{0.0, 1.0, 0.0}}, StaticTemporal{}};
  const AgentState st{0, 0, 1.0, 20.0, std::nullopt, 0};
  EXPECT_DOUBLE_EQ(apply_action(st, Action::move(Direction::east), s).e_in, 0.0);
  const AgentState st1{1, 0, 1.0, 20.0, std::nullopt, 0};
  EXPECT_DOUBLE_EQ(apply_action(st1, Action::move(Direction::east), s).e_in, 1.0);
}

TEST(ApplyAction, TerminalStateIsUsageError) {
  const auto s = flat_world(0.0, 1.0);
  EXPECT_THROW(apply_action({0, 0, 0.0, 20.0, std::nullopt, 0}, Action::idle(), s), UsageError);
  EXPECT_THROW(apply_action({0, 0, 1.0, 41.0, std::nullopt, 0}, Action::idle(), s), UsageError);
  EXPECT_THROW(apply_action({0, 0, 1.0, 20.0, std::nullopt, s.max_steps}, Action::idle(), s),
               UsageError);
}

TEST(ApplyAction, LedgerIdentityOnRandomWalks) {
  std::mt19937_64 gen(11);
  EnvironmentSpec s;
  s.width = 5;
  s.height = 5;
  s.harvest_field = {{GaussianHotspots{{Hotspot{2, 2, 1.0, 1.2}}}}, SinusoidalTemporal{9.0, 0.4}};
  s.dissipation_field = {{ConstantField{0.5}, LinearGradient{0.0, 0.2, 0.1}}, StaticTemporal{}};
  for (int ep = 0; ep < 50; ++ep) {
    AgentState st{static_cast<int>(gen() % 5), static_cast<int>(gen() % 5), 1.5, 22.0,
                  std::nullopt, 0};
    for (;;) {
      const Action a = kAllActions[gen() % kNumActions];
      const auto out = apply_action(st, a, s);
      EXPECT_NEAR(out.next_state.energy - st.energy, out.e_in - out.e_out, 1e-12);
      EXPECT_GE(out.next_state.temperature, s.t_ambient);
      EXPECT_TRUE(s.in_bounds(out.next_state.x, out.next_state.y));
      st = out.next_state;
      if (out.terminal) break;
    }
  }
}

TEST(InitialState, Validation) {
  const EnvironmentSpec s;
  EXPECT_NO_THROW(validate(InitialState{0, 0, 1.0, 20.0}, s));
  const auto key_of = [&](InitialState i) {
    try {
      validate(i, s);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string();
  };
  EXPECT_EQ(key_of({s.width, 0, 1.0, 20.0}), "init.x");
  EXPECT_EQ(key_of({0, -1, 1.0, 20.0}), "init.y");
  EXPECT_EQ(key_of({0, 0, 0.0, 20.0}), "init.energy");
  EXPECT_EQ(key_of({0, 0, 1.0, 19.0}), "init.temperature");
  EXPECT_EQ(key_of({0, 0, 1.0, 40.5}), "init.temperature");
}
