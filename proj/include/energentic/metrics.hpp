#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "trajectory.hpp"

namespace energentic {

// ---------------------------------------------------------------------------
// Energetic utility and the cumulative-surplus horizon
// ---------------------------------------------------------------------------

/// Per-step net energy E_in - E_out, one entry per transition.
inline std::vector<double> euf_series(const Trajectory& traj) {
  if (traj.steps.empty()) throw UsageError("euf_series: empty trajectory");
  std::vector<double> out;
  out.reserve(traj.steps.size());
  for (const auto& s : traj.steps) out.push_back(s.net());
  return out;
}

/// Largest t whose prefix sum euf[0..t] is non-negative, or nullopt when no
/// prefix qualifies. This is the maximum such t, not the first failure.
inline std::optional<std::size_t> survival_horizon(std::span<const double> euf) {
  std::optional<std::size_t> best;
  double sum = 0.0;
  for (std::size_t t = 0; t < euf.size(); ++t) {
    sum += euf[t];
    if (sum >= 0.0) best = t;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Viability scores
// ---------------------------------------------------------------------------

/// Average net energy over all steps, counting only non-idle steps in the
/// numerator. A trajectory that only idles scores exactly 0.
inline double evs(std::span<const StepRecord> steps) {
  if (steps.empty()) throw UsageError("evs: empty trajectory");
  double sum = 0.0;
  for (const auto& s : steps) {
    if (s.action.kind != ActionKind::idle) sum += s.net();
  }
  return sum / static_cast<double>(steps.size());
}

inline double evs(const Trajectory& traj) { return evs(std::span<const StepRecord>(traj.steps)); }

/// 1 - fraction of temperatures above t_crit.
inline double tri(std::span<const double> temperatures, double t_crit) {
  if (temperatures.empty()) throw UsageError("tri: empty trajectory");
  std::size_t over = 0;
  for (double t : temperatures) over += t > t_crit ? 1 : 0;
  return 1.0 - static_cast<double>(over) / static_cast<double>(temperatures.size());
}

/// Post-transition temperatures T_1..T_n of an episode.
inline std::vector<double> post_step_temperatures(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.steps.size());
  for (std::size_t i = 0; i < traj.steps.size(); ++i) out.push_back(traj.temperature_after(i));
  return out;
}

inline double tri(const Trajectory& traj, double t_crit) {
  return tri(post_step_temperatures(traj), t_crit);
}

// ---------------------------------------------------------------------------
// Horizon forecasting
// ---------------------------------------------------------------------------

struct RateExtrapolation {
  int window = 10;
};

/// Reads the realised remaining lifespan; exists to pin SHE to zero.
struct OracleForecaster {};

using Forecaster = std::variant<RateExtrapolation, OracleForecaster>;

inline constexpr double kRateFloor = 1e-6;

inline void validate(const Forecaster& f) {
  if (const auto* r = std::get_if<RateExtrapolation>(&f); r && r->window < 1)
    throw ConfigError("forecaster.window", "must be >= 1");
}

/// Remaining steps until energy runs out at the recent burn rate, capped at
/// the steps left before the step cap. A non-negative recent mean (or no
/// history yet) forecasts the cap.
inline double rate_extrapolation_forecast(double energy, std::span<const double> recent_net,
                                          double remaining_cap) {
  if (recent_net.empty()) return remaining_cap;
  double mean = 0.0;
  for (double v : recent_net) mean += v;
  mean /= static_cast<double>(recent_net.size());
  if (mean >= 0.0) return remaining_cap;
  return std::min(remaining_cap, std::max(energy, 0.0) / std::max(kRateFloor, -mean));
}

/// True remaining lifespan H_t = lifespan - t for every recorded step.
inline std::vector<double> true_remaining(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.steps.size());
  const auto n = traj.steps.size();
  for (std::size_t t = 0; t < n; ++t) out.push_back(static_cast<double>(n - t));
  return out;
}

/// Forecast for every step. Rate extrapolation reads only steps before t;
/// the oracle reads the realised lifespan.
inline std::vector<double> forecast_series(const Forecaster& f, const Trajectory& traj) {
  validate(f);
  if (std::holds_alternative<OracleForecaster>(f)) return true_remaining(traj);
  const auto window = static_cast<std::size_t>(std::get<RateExtrapolation>(f).window);
  std::vector<double> nets;
  nets.reserve(traj.steps.size());
  for (const auto& s : traj.steps) nets.push_back(s.net());
  std::vector<double> out;
  out.reserve(traj.steps.size());
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const std::size_t lo = t > window ? t - window : 0;
    const double cap = static_cast<double>(traj.max_steps - traj.steps[t].step);
    out.push_back(rate_extrapolation_forecast(
        traj.steps[t].energy, std::span<const double>(nets).subspan(lo, t - lo), cap));
  }
  return out;
}

/// Mean absolute error between forecasts and realised remaining lifespan.
inline double she(std::span<const double> forecasts, std::span<const double> truth) {
  if (forecasts.size() != truth.size()) throw UsageError("she: length mismatch");
  if (forecasts.empty()) throw UsageError("she: empty trajectory");
  double sum = 0.0;
  for (std::size_t i = 0; i < forecasts.size(); ++i) sum += std::abs(forecasts[i] - truth[i]);
  return sum / static_cast<double>(forecasts.size());
}

inline double she(std::span<const double> forecasts, const Trajectory& traj) {
  return she(forecasts, true_remaining(traj));
}

/// Forecasts as recorded in the trajectory.
inline std::vector<double> recorded_forecasts(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.steps.size());
  for (const auto& s : traj.steps) out.push_back(s.forecast);
  return out;
}

/// EVS * TRI / (1 + SHE).
inline double eas(double evs_value, double tri_value, double she_value) {
  if (!(tri_value >= 0.0 && tri_value <= 1.0)) throw UsageError("eas: tri outside [0,1]");
  if (!(she_value >= 0.0)) throw UsageError("eas: she must be >= 0");
  return evs_value * tri_value / (1.0 + she_value);
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct MetricsReport {
  double evs = 0.0;
  double tri = 1.0;
  double she = 0.0;
  double eas = 0.0;
  std::optional<std::size_t> survival_horizon;
  int empirical_lifespan = 0;
  std::vector<double> euf_series;
};

/// All scores for an episode, using the forecasts recorded in it.
inline MetricsReport compute_metrics(const Trajectory& traj, double t_crit) {
  MetricsReport r;
  r.euf_series = euf_series(traj);
  r.evs = evs(traj);
  r.tri = tri(traj, t_crit);
  r.she = she(recorded_forecasts(traj), traj);
  r.eas = eas(r.evs, r.tri, r.she);
  r.survival_horizon = survival_horizon(r.euf_series);
  r.empirical_lifespan = traj.lifespan();
  return r;
}

}  // namespace energentic
