#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>

#include "action.hpp"
#include "environment.hpp"
#include "errors.hpp"

namespace energentic {

enum class TerminalCause { energy_depleted, overheated, max_steps };

inline std::string to_string(TerminalCause c) {
  switch (c) {
    case TerminalCause::energy_depleted:
      return "energy_depleted";
    case TerminalCause::overheated:
      return "overheated";
    case TerminalCause::max_steps:
      return "max_steps";
  }
  return "max_steps";
}

/// Failure causes, as opposed to reaching the step cap.
constexpr bool is_failure(TerminalCause c) { return c != TerminalCause::max_steps; }

struct AgentState {
  int x = 0;
  int y = 0;
  double energy = 1.0;
  double temperature = 20.0;
  std::optional<Action> last_action;
  int step = 0;
};

/// Episode start: position, stored energy, internal temperature.
struct InitialState {
  int x = 0;
  int y = 0;
  double energy = 1.0;
  double temperature = 20.0;

  AgentState to_state() const { return {x, y, energy, temperature, std::nullopt, 0}; }
};

/// Requires an in-bounds cell, energy > 0 and temperature in [t_ambient, t_crit].
inline void validate(const InitialState& init, const EnvironmentSpec& spec) {
  if (init.x < 0 || init.x >= spec.width) throw ConfigError("init.x", "outside the grid");
  if (init.y < 0 || init.y >= spec.height) throw ConfigError("init.y", "outside the grid");
  if (!(init.energy > 0.0) || !std::isfinite(init.energy))
    throw ConfigError("init.energy", "must be > 0");
  if (!(init.temperature >= spec.t_ambient && init.temperature <= spec.t_crit))
    throw ConfigError("init.temperature", "must be in [t_ambient, t_crit]");
}

struct StepOutcome {
  AgentState next_state;
  double e_in = 0.0;
  double e_out = 0.0;
  std::optional<TerminalCause> terminal;
};

struct EnergyStep {
  double e_next = 0.0;
  double e_in = 0.0;
  double e_out = 0.0;
};

/// e' = e + eta * P * delta_a - c(a)
inline EnergyStep step_energy(double e, double p_local, const Action& action,
                              const EnvironmentSpec& spec) {
  EnergyStep r;
  r.e_in = spec.eta * p_local * spec.gain_factors[action];
  r.e_out = spec.action_costs[action];
  r.e_next = e + (r.e_in - r.e_out);
  return r;
}

/// T' = max(t_ambient, T + alpha * h(a) - beta * D)
inline double step_thermal(double temperature, const Action& action, double d_local,
                           const EnvironmentSpec& spec) {
  const double next = temperature + spec.alpha * spec.action_heat[action] - spec.beta * d_local;
  return std::max(next, spec.t_ambient);
}

/// The cause that ends an episode in `s`, if any. Depletion wins ties.
inline std::optional<TerminalCause> terminal_cause(const AgentState& s,
                                                   const EnvironmentSpec& spec) {
  if (s.energy <= 0.0) return TerminalCause::energy_depleted;
  if (s.temperature > spec.t_crit) return TerminalCause::overheated;
  if (s.step >= spec.max_steps) return TerminalCause::max_steps;
  return std::nullopt;
}

/// Cell reached by `action` from (x, y); moves clamp at the grid edge.
inline std::pair<int, int> destination(const EnvironmentSpec& spec, int x, int y,
                                       const Action& action) {
  if (action.kind != ActionKind::move) return {x, y};
  const auto [dx, dy] = direction_offset(action.direction);
  return {std::clamp(x + dx, 0, spec.width - 1), std::clamp(y + dy, 0, spec.height - 1)};
}

/// One transition. Fields are sampled at the cell occupied during the step
/// (the pre-move cell); the agent then arrives at its destination.
inline StepOutcome apply_action(const AgentState& state, const Action& action,
                                const EnvironmentSpec& spec) {
  if (!spec.in_bounds(state.x, state.y)) throw UsageError("apply_action: state out of bounds");
  if (terminal_cause(state, spec)) throw UsageError("apply_action: state is terminal");

  const double p = potential_at(spec, state.x, state.y, state.step);
  const double d = dissipation_at(spec, state.x, state.y, state.step);
  const auto energy = step_energy(state.energy, p, action, spec);

  StepOutcome out;
  out.e_in = energy.e_in;
  out.e_out = energy.e_out;
  auto& next = out.next_state;
  std::tie(next.x, next.y) = destination(spec, state.x, state.y, action);
  next.energy = energy.e_next;
  next.temperature = step_thermal(state.temperature, action, d, spec);
  next.last_action = action;
  next.step = state.step + 1;
  out.terminal = terminal_cause(next, spec);
  return out;
}

}  // namespace energentic
