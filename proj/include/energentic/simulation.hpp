#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "dynamics.hpp"
#include "environment.hpp"
#include "errors.hpp"
#include "metrics.hpp"
#include "policies.hpp"
#include "rng.hpp"
#include "trajectory.hpp"

namespace energentic {

// ---------------------------------------------------------------------------
// Behavioural modes
// ---------------------------------------------------------------------------

/// Stress thresholds as fractions of the energy cap and of the
/// ambient-to-critical temperature span.
struct ModeThresholds {
  double e_low = 0.2;
  double t_high = 0.8;
};

inline void validate(const ModeThresholds& m) {
  if (!(m.e_low > 0.0 && m.e_low < 1.0)) throw ConfigError("modes.e_low", "must be in (0,1)");
  if (!(m.t_high > 0.0 && m.t_high < 1.0)) throw ConfigError("modes.t_high", "must be in (0,1)");
}

/// degraded: acting while energy or temperature is past its stress
/// threshold; dormant: idling; active: otherwise.
inline Mode classify_mode(const AgentState& state, const Action& action,
                          const EnvironmentSpec& spec, const ModeThresholds& th = {}) {
  const bool acting = action.kind != ActionKind::idle;
  const bool low_energy = state.energy < th.e_low * spec.energy_cap;
  const bool hot = state.temperature > spec.t_ambient + th.t_high * (spec.t_crit - spec.t_ambient);
  if (acting && (low_energy || hot)) return Mode::degraded;
  if (!acting) return Mode::dormant;
  return Mode::active;
}

// ---------------------------------------------------------------------------
// Episodes
// ---------------------------------------------------------------------------

/// Runs one episode to termination, recording every transition's ledger,
/// mode and horizon forecast. Deterministic in all arguments.
inline Trajectory run_episode(const EnvironmentSpec& spec, const Policy& policy,
                              const InitialState& init, std::uint64_t seed,
                              const Forecaster& forecaster = RateExtrapolation{},
                              const ModeThresholds& thresholds = {}) {
  validate(spec);
  validate(init, spec);
  validate(forecaster);
  validate(thresholds);

  Trajectory traj;
  traj.env_digest = digest(spec);
  traj.seed = seed;
  traj.max_steps = spec.max_steps;
  traj.steps.reserve(static_cast<std::size_t>(spec.max_steps));

  Rng rng(seed);
  AgentState state = init.to_state();
  for (;;) {
    const Action a = select_action(policy, state, spec, rng);
    const StepOutcome out = apply_action(state, a, spec);
    StepRecord rec;
    rec.step = state.step;
    rec.x = state.x;
    rec.y = state.y;
    rec.energy = state.energy;
    rec.temperature = state.temperature;
    rec.action = a;
    rec.e_in = out.e_in;
    rec.e_out = out.e_out;
    rec.mode = classify_mode(state, a, spec, thresholds);
    traj.steps.push_back(rec);
    state = out.next_state;
    if (out.terminal) {
      traj.cause = *out.terminal;
      break;
    }
  }
  traj.final_state = state;

  const auto forecasts = forecast_series(forecaster, traj);
  for (std::size_t i = 0; i < traj.steps.size(); ++i) traj.steps[i].forecast = forecasts[i];
  return traj;
}

// ---------------------------------------------------------------------------
// Plot channels
// ---------------------------------------------------------------------------

/// Normalised energy, temperature and viability for one timestep. The
/// viability channel is the EAS of the episode prefix ending at this step,
/// clamped to [0,1].
struct HeatmapRow {
  int step = 0;
  double energy = 0.0;
  double temperature = 0.0;
  double viability = 0.0;
};

/// One row per recorded state, including the terminal state.
inline std::vector<HeatmapRow> heatmap_channels(const Trajectory& traj,
                                                const EnvironmentSpec& spec) {
  if (traj.steps.empty()) throw UsageError("heatmap_channels: empty trajectory");
  const auto norm_e = [&](double e) { return std::clamp(e / spec.energy_cap, 0.0, 1.0); };
  const auto norm_t = [&](double t) {
    return std::clamp((t - spec.t_ambient) / (spec.t_crit - spec.t_ambient), 0.0, 1.0);
  };
  const auto truth = true_remaining(traj);

  std::vector<HeatmapRow> rows;
  rows.reserve(traj.steps.size() + 1);
  double active_net = 0.0;
  double abs_err = 0.0;
  std::size_t over = 0;
  double prefix_eas = 0.0;
  for (std::size_t i = 0; i < traj.steps.size(); ++i) {
    const auto& s = traj.steps[i];
    if (s.action.kind != ActionKind::idle) active_net += s.net();
    abs_err += std::abs(s.forecast - truth[i]);
    over += traj.temperature_after(i) > spec.t_crit ? 1 : 0;
    const double n = static_cast<double>(i + 1);
    prefix_eas = eas(active_net / n, 1.0 - static_cast<double>(over) / n, abs_err / n);
    rows.push_back({s.step, norm_e(s.energy), norm_t(s.temperature),
                    std::clamp(prefix_eas, 0.0, 1.0)});
  }
  rows.push_back({traj.final_state.step, norm_e(traj.final_state.energy),
                  norm_t(traj.final_state.temperature), std::clamp(prefix_eas, 0.0, 1.0)});
  return rows;
}

// ---------------------------------------------------------------------------
// Initial-condition sweep
// ---------------------------------------------------------------------------

/// Empirical lifespans over a grid of initial energies (columns) and
/// initial temperatures (rows).
struct HorizonMap {
  std::vector<double> e0_axis;
  std::vector<double> t0_axis;
  std::vector<std::vector<int>> cells;  // cells[i][j]: t0_axis[i], e0_axis[j]
};

/// `count` evenly spaced values from lo to hi inclusive (just lo if count == 1).
inline std::vector<double> linspace(double lo, double hi, int count, const std::string& key) {
  if (count < 1) throw ConfigError(key + ".count", "must be >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError(key, "bounds must be finite");
  if (count > 1 ? !(lo < hi) : !(lo <= hi)) throw ConfigError(key, "min must be < max");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
  }
  return out;
}

namespace detail {

inline void validate_axis(const std::vector<double>& axis, const std::string& key) {
  if (axis.empty()) throw ConfigError(key, "axis is empty");
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) throw ConfigError(key, "axis must be strictly increasing");
  }
}

}  // namespace detail

/// Every cell runs the same policy from (x, y) with the same seed, so the
/// map varies only through initial conditions. Cells are independent; the
/// result does not depend on `threads`.
inline HorizonMap sweep_horizon_map(const EnvironmentSpec& spec, const Policy& policy, int x, int y,
                                    const std::vector<double>& e0_axis,
                                    const std::vector<double>& t0_axis, std::uint64_t base_seed,
                                    unsigned threads = 1) {
  validate(spec);
  detail::validate_axis(e0_axis, "sweep.e0");
  detail::validate_axis(t0_axis, "sweep.t0");
  // Surface bad initial conditions on the calling thread.
  validate(InitialState{x, y, e0_axis.front(), t0_axis.front()}, spec);
  validate(InitialState{x, y, e0_axis.back(), t0_axis.back()}, spec);

  HorizonMap map{e0_axis, t0_axis,
                 std::vector<std::vector<int>>(t0_axis.size(), std::vector<int>(e0_axis.size()))};
  const std::size_t ncols = e0_axis.size();
  const std::size_t total = t0_axis.size() * ncols;
  const auto run_cell = [&](std::size_t idx) {
    const std::size_t i = idx / ncols;
    const std::size_t j = idx % ncols;
    const InitialState init{x, y, e0_axis[j], t0_axis[i]};
    map.cells[i][j] = run_episode(spec, policy, init, base_seed, OracleForecaster{}).lifespan();
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  if (threads == 1) {
    for (std::size_t idx = 0; idx < total; ++idx) run_cell(idx);
    return map;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t idx = next++; idx < total; idx = next++) run_cell(idx);
      } catch (...) {
        errors[w] = std::current_exception();
        next = total;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return map;
}

}  // namespace energentic
