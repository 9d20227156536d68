#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "action.hpp"
#include "dynamics.hpp"

namespace energentic {

enum class Mode { dormant, active, degraded };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::dormant:
      return "dormant";
    case Mode::active:
      return "active";
    case Mode::degraded:
      return "degraded";
  }
  return "dormant";
}

/// Pre-action state at one timestep plus the action taken and its ledger.
struct StepRecord {
  int step = 0;
  int x = 0;
  int y = 0;
  double energy = 0.0;
  double temperature = 0.0;
  Action action;
  double e_in = 0.0;
  double e_out = 0.0;
  Mode mode = Mode::dormant;
  double forecast = 0.0;  // forecasted remaining lifespan at this step

  double net() const { return e_in - e_out; }
};

/// One episode. `steps[i]` is the state before transition i; `final_state`
/// is the state after the last transition (the terminal state).
struct Trajectory {
  std::string env_digest;
  std::uint64_t seed = 0;
  int max_steps = 0;
  std::vector<StepRecord> steps;
  AgentState final_state;
  TerminalCause cause = TerminalCause::max_steps;

  /// Number of transitions taken before termination.
  int lifespan() const { return static_cast<int>(steps.size()); }

  /// Energy after transition i.
  double energy_after(std::size_t i) const {
    return i + 1 < steps.size() ? steps[i + 1].energy : final_state.energy;
  }

  /// Temperature after transition i.
  double temperature_after(std::size_t i) const {
    return i + 1 < steps.size() ? steps[i + 1].temperature : final_state.temperature;
  }
};

}  // namespace energentic
