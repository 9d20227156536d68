#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "action.hpp"
#include "dynamics.hpp"
#include "environment.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace energentic {

// ---------------------------------------------------------------------------
// Q-table
// ---------------------------------------------------------------------------

struct StateKey {
  int energy_bin = 0;
  int temp_bin = 0;
  int cell = 0;

  friend bool operator==(const StateKey&, const StateKey&) = default;
};

using ActionValues = std::array<double, kNumActions>;

/// Discretisation and learning constants carried with the table so that a
/// serialised table is self-describing.
struct QTableLayout {
  int energy_bins = 8;
  int temp_bins = 8;
  int width = 1;
  int height = 1;
  double energy_cap = 5.0;
  double t_ambient = 20.0;
  double t_crit = 40.0;
  double learning_rate = 0.1;
  double discount = 0.95;

  static QTableLayout for_environment(const EnvironmentSpec& spec, int energy_bins = 8,
                                      int temp_bins = 8, double learning_rate = 0.1,
                                      double discount = 0.95) {
    return {energy_bins, temp_bins, spec.width,   spec.height, spec.energy_cap,
            spec.t_ambient, spec.t_crit, learning_rate, discount};
  }
};

/// Dense tabular action-value store over (energy bin, temperature bin, cell).
/// Entries start at zero.
class QTable {
 public:
  explicit QTable(const QTableLayout& layout) : layout_(layout) {
    if (layout.energy_bins < 1) throw ConfigError("training.energy_bins", "must be >= 1");
    if (layout.temp_bins < 1) throw ConfigError("training.temp_bins", "must be >= 1");
    if (layout.width < 1 || layout.height < 1) throw ConfigError("qtable", "empty grid");
    // lr = 0 is accepted as a frozen table.
    if (!(layout.learning_rate >= 0.0 && layout.learning_rate <= 1.0))
      throw ConfigError("training.learning_rate", "must be in [0,1]");
    if (!(layout.discount > 0.0 && layout.discount <= 1.0))
      throw ConfigError("training.discount", "must be in (0,1]");
    if (!(layout.energy_cap > 0.0) || !(layout.t_crit > layout.t_ambient))
      throw ConfigError("qtable", "degenerate discretisation range");
    const std::size_t n = num_keys();
    values_.assign(n * kNumActions, 0.0);
  }

  const QTableLayout& layout() const { return layout_; }

  std::size_t num_keys() const {
    return static_cast<std::size_t>(layout_.energy_bins) * layout_.temp_bins * layout_.width *
           layout_.height;
  }

  StateKey discretize(const AgentState& s) const {
    StateKey k;
    k.energy_bin = bin(s.energy, 0.0, layout_.energy_cap, layout_.energy_bins);
    k.temp_bin = bin(s.temperature, layout_.t_ambient, layout_.t_crit, layout_.temp_bins);
    k.cell = s.y * layout_.width + s.x;
    return k;
  }

  bool contains(const StateKey& k) const {
    return k.energy_bin >= 0 && k.energy_bin < layout_.energy_bins && k.temp_bin >= 0 &&
           k.temp_bin < layout_.temp_bins && k.cell >= 0 && k.cell < layout_.width * layout_.height;
  }

  ActionValues values(const StateKey& k) const {
    ActionValues out;
    const std::size_t base = offset(k) * kNumActions;
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(base), kNumActions, out.begin());
    return out;
  }

  double value(const StateKey& k, const Action& a) const {
    return values_[offset(k) * kNumActions + action_index(a)];
  }

  void set(const StateKey& k, const Action& a, double v) {
    values_[offset(k) * kNumActions + action_index(a)] = v;
  }

  /// Keys holding at least one non-zero value, in storage order. This is
  /// the sparse part a serialised table needs.
  std::vector<StateKey> nonzero_keys() const {
    std::vector<StateKey> keys;
    for (std::size_t i = 0; i < num_keys(); ++i) {
      const auto first = values_.begin() + static_cast<std::ptrdiff_t>(i * kNumActions);
      if (std::any_of(first, first + kNumActions, [](double v) { return v != 0.0; }))
        keys.push_back(key_at(i));
    }
    return keys;
  }

  double max_value(const StateKey& k) const {
    const auto v = values(k);
    return *std::max_element(v.begin(), v.end());
  }

  /// Highest-valued action; ties resolve to the earliest in kAllActions.
  Action argmax(const StateKey& k) const {
    const auto v = values(k);
    std::size_t best = 0;
    for (std::size_t i = 1; i < kNumActions; ++i) {
      if (v[i] > v[best]) best = i;
    }
    return kAllActions[best];
  }

  friend bool operator==(const QTable& a, const QTable& b) {
    return a.values_ == b.values_ &&
           a.layout_.energy_bins == b.layout_.energy_bins &&
           a.layout_.temp_bins == b.layout_.temp_bins && a.layout_.width == b.layout_.width &&
           a.layout_.height == b.layout_.height;
  }

 private:
  static int bin(double v, double lo, double hi, int bins) {
    const double scaled = (v - lo) / (hi - lo) * bins;
    if (!(scaled > 0.0)) return 0;
    if (scaled >= bins) return bins - 1;
    return static_cast<int>(scaled);
  }

  std::size_t offset(const StateKey& k) const {
    if (!contains(k)) throw UsageError("QTable: key outside bin/cell bounds");
    return (static_cast<std::size_t>(k.cell) * layout_.temp_bins + k.temp_bin) *
               layout_.energy_bins +
           k.energy_bin;
  }

  StateKey key_at(std::size_t i) const {
    StateKey k;
    k.energy_bin = static_cast<int>(i % layout_.energy_bins);
    i /= layout_.energy_bins;
    k.temp_bin = static_cast<int>(i % layout_.temp_bins);
    k.cell = static_cast<int>(i / layout_.temp_bins);
    return k;
  }

  QTableLayout layout_;
  std::vector<double> values_;
};

/// One-step Q-learning backup:
///   Q(s,a) += lr * (r + gamma * max_a' Q(s',a') * [not terminal] - Q(s,a))
inline void q_update(QTable& table, const StateKey& s, const Action& a, double r,
                     const StateKey& s_next, bool terminal) {
  const auto& l = table.layout();
  const double bootstrap = terminal ? 0.0 : l.discount * table.max_value(s_next);
  const double q = table.value(s, a);
  table.set(s, a, q + l.learning_rate * (r + bootstrap - q));
}

// ---------------------------------------------------------------------------
// Reward
// ---------------------------------------------------------------------------

struct RewardSpec {
  double alive_bonus = 1.0;
  double compute_bonus = 0.2;
  double death_penalty = 10.0;
};

inline void validate(const RewardSpec& r) {
  if (!(r.alive_bonus >= 0.0)) throw ConfigError("reward.alive_bonus", "must be >= 0");
  if (!(r.compute_bonus >= 0.0)) throw ConfigError("reward.compute_bonus", "must be >= 0");
  if (!(r.death_penalty >= 0.0)) throw ConfigError("reward.death_penalty", "must be >= 0");
}

/// Alive bonus and compute bonus on non-terminal steps; death penalty on
/// depletion or overheating. Reaching the step cap earns nothing.
inline double reward(const StepOutcome& outcome, const Action& action, const RewardSpec& r) {
  if (outcome.terminal) return is_failure(*outcome.terminal) ? -r.death_penalty : 0.0;
  return r.alive_bonus + (action.kind == ActionKind::compute ? r.compute_bonus : 0.0);
}

// ---------------------------------------------------------------------------
// Policies
// ---------------------------------------------------------------------------

struct FixedComputePolicy {};
struct GreedyHarvestPolicy {};
struct QLearningPolicy {
  std::shared_ptr<const QTable> table;
  double epsilon = 0.0;
};

using Policy = std::variant<FixedComputePolicy, GreedyHarvestPolicy, QLearningPolicy>;

inline std::string describe(const Policy& p) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FixedComputePolicy>) {
          return "fixed_compute";
        } else if constexpr (std::is_same_v<T, GreedyHarvestPolicy>) {
          return "greedy_harvest";
        } else {
          char buf[64];
          std::snprintf(buf, sizeof buf, "q_learning(epsilon=%.9g)", v.epsilon);
          return buf;
        }
      },
      p);
}

/// The same policy with exploration switched off.
inline Policy evaluation_mode(Policy p) {
  if (auto* q = std::get_if<QLearningPolicy>(&p)) q->epsilon = 0.0;
  return p;
}

/// Net energy rate the agent will have after taking `action`: for idle the
/// current cell's stationary harvest, for a move the destination cell's
/// stationary harvest, each minus the action's cost.
inline double expected_net_energy(const AgentState& s, const Action& action,
                                  const EnvironmentSpec& spec) {
  const auto [dx, dy] = destination(spec, s.x, s.y, action);
  const double p = potential_at(spec, dx, dy, s.step);
  return spec.eta * p * spec.gain_factors.idle - spec.action_costs[action];
}

/// Best of {idle, move N/E/S/W} by expected_net_energy; never computes.
inline Action greedy_harvest_action(const AgentState& s, const EnvironmentSpec& spec) {
  Action best = kAllActions[0];
  double best_value = expected_net_energy(s, best, spec);
  for (std::size_t i = 1; i < 5; ++i) {
    const double v = expected_net_energy(s, kAllActions[i], spec);
    if (v > best_value) {
      best_value = v;
      best = kAllActions[i];
    }
  }
  return best;
}

/// With probability epsilon a uniformly random action, otherwise argmax.
/// With epsilon == 0 the generator is not touched.
inline Action epsilon_greedy(const QTable& table, const StateKey& key, double epsilon, Rng& rng) {
  if (epsilon > 0.0 && rng.uniform() < epsilon) return kAllActions[rng.below(kNumActions)];
  return table.argmax(key);
}

inline Action select_action(const Policy& policy, const AgentState& state,
                            const EnvironmentSpec& spec, Rng& rng) {
  if (terminal_cause(state, spec)) throw UsageError("select_action: state is terminal");
  return std::visit(
      [&](const auto& p) -> Action {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FixedComputePolicy>) {
          return Action::compute();
        } else if constexpr (std::is_same_v<T, GreedyHarvestPolicy>) {
          return greedy_harvest_action(state, spec);
        } else {
          if (!p.table) throw UsageError("select_action: q_learning policy without a table");
          return epsilon_greedy(*p.table, p.table->discretize(state), p.epsilon, rng);
        }
      },
      policy);
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

/// epsilon_k = max(min, initial * decay^k)
struct EpsilonSchedule {
  double initial = 1.0;
  double decay = 0.99;
  double min = 0.05;

  double at(int episode) const {
    return std::max(min, initial * std::pow(decay, static_cast<double>(episode)));
  }
};

inline void validate(const EpsilonSchedule& s) {
  if (!(s.initial >= 0.0 && s.initial <= 1.0))
    throw ConfigError("training.epsilon.initial", "must be in [0,1]");
  if (!(s.min >= 0.0 && s.min <= 1.0))
    throw ConfigError("training.epsilon.min", "must be in [0,1]");
  if (!(s.decay > 0.0 && s.decay <= 1.0))
    throw ConfigError("training.epsilon.decay", "must be in (0,1]");
}

struct TrainingConfig {
  int episodes = 3000;
  EpsilonSchedule schedule;
  double learning_rate = 0.1;
  double discount = 0.95;
  int energy_bins = 8;
  int temp_bins = 8;
  InitialState init;
};

struct TrainingLogEntry {
  int episode = 0;
  int length = 0;
  double episode_return = 0.0;
  TerminalCause cause = TerminalCause::max_steps;
  double epsilon = 0.0;
};

struct TrainingResult {
  QTable table;
  std::vector<TrainingLogEntry> log;
};

/// Epsilon-greedy one-step Q-learning from a fixed start. Step-cap
/// truncation bootstraps; depletion and overheating do not. Deterministic in
/// (env, reward, config, seed).
inline TrainingResult train(const EnvironmentSpec& env, const RewardSpec& rspec,
                            const TrainingConfig& cfg, std::uint64_t seed) {
  validate(env);
  validate(rspec);
  validate(cfg.schedule);
  validate(cfg.init, env);
  if (cfg.episodes < 1) throw ConfigError("training.episodes", "must be >= 1");

  TrainingResult result{QTable(QTableLayout::for_environment(env, cfg.energy_bins, cfg.temp_bins,
                                                             cfg.learning_rate, cfg.discount)),
                        {}};
  result.log.reserve(static_cast<std::size_t>(cfg.episodes));
  Rng rng(seed);
  QTable& table = result.table;

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    const double eps = cfg.schedule.at(ep);
    AgentState state = cfg.init.to_state();
    StateKey key = table.discretize(state);
    double ret = 0.0;
    TerminalCause cause = TerminalCause::max_steps;
    for (;;) {
      const Action a = epsilon_greedy(table, key, eps, rng);
      const StepOutcome out = apply_action(state, a, env);
      const double r = reward(out, a, rspec);
      const StateKey next_key = table.discretize(out.next_state);
      q_update(table, key, a, r, next_key, out.terminal && is_failure(*out.terminal));
      ret += r;
      state = out.next_state;
      key = next_key;
      if (out.terminal) {
        cause = *out.terminal;
        break;
      }
    }
    result.log.push_back({ep, state.step, ret, cause, eps});
  }
  return result;
}

}  // namespace energentic
