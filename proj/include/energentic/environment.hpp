#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "action.hpp"
#include "errors.hpp"

namespace energentic {

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

struct ConstantField {
  double value = 0.0;
};

struct Hotspot {
  double cx = 0.0;
  double cy = 0.0;
  double amplitude = 1.0;
  double sigma = 1.0;
};

/// Sum of isotropic Gaussian bumps.
struct GaussianHotspots {
  std::vector<Hotspot> hotspots;
};

/// base + dx*x + dy*y
struct LinearGradient {
  double base = 0.0;
  double dx = 0.0;
  double dy = 0.0;
};

using FieldTerm = std::variant<ConstantField, GaussianHotspots, LinearGradient>;

struct StaticTemporal {};

/// Multiplies the spatial value by 1 + amplitude_fraction * sin(2*pi*t/period).
struct SinusoidalTemporal {
  double period = 1.0;
  double amplitude_fraction = 0.0;
};

using Temporal = std::variant<StaticTemporal, SinusoidalTemporal>;

/// A scalar field over the grid: the sum of its terms, optionally modulated
/// in time, clamped at zero.
struct FieldSpec {
  std::vector<FieldTerm> terms;
  Temporal temporal = StaticTemporal{};

  static FieldSpec constant(double v) { return {{ConstantField{v}}, StaticTemporal{}}; }
};

inline double evaluate_term(const FieldTerm& term, double x, double y) {
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantField>) {
          return f.value;
        } else if constexpr (std::is_same_v<T, GaussianHotspots>) {
          double sum = 0.0;
          for (const auto& h : f.hotspots) {
            const double ddx = x - h.cx;
            const double ddy = y - h.cy;
            sum += h.amplitude * std::exp(-(ddx * ddx + ddy * ddy) / (2.0 * h.sigma * h.sigma));
          }
          return sum;
        } else {
          return f.base + f.dx * x + f.dy * y;
        }
      },
      term);
}

inline double evaluate_field(const FieldSpec& field, int x, int y, std::int64_t t) {
  double v = 0.0;
  for (const auto& term : field.terms) v += evaluate_term(term, x, y);
  if (const auto* s = std::get_if<SinusoidalTemporal>(&field.temporal)) {
    // Reduce t modulo the period first so that t and t + period hit the same phase
    // even for integer periods with large t.
    const double phase = std::fmod(static_cast<double>(t), s->period) / s->period;
    v *= 1.0 + s->amplitude_fraction * std::sin(2.0 * std::numbers::pi * phase);
  }
  return v > 0.0 ? v : 0.0;
}

// ---------------------------------------------------------------------------
// Environment
// ---------------------------------------------------------------------------

/// Per-action scalar (cost, heat output, or harvest gain).
struct ActionTable {
  double idle = 0.0;
  double compute = 0.0;
  double move = 0.0;

  double operator[](const Action& a) const {
    switch (a.kind) {
      case ActionKind::idle:
        return idle;
      case ActionKind::compute:
        return compute;
      case ActionKind::move:
        return move;
    }
    return idle;
  }
};

struct EnvironmentSpec {
  int width = 8;
  int height = 8;
  FieldSpec harvest_field = FieldSpec::constant(0.0);
  FieldSpec dissipation_field = FieldSpec::constant(1.0);
  double eta = 0.9;
  double alpha = 1.0;
  double beta = 0.5;
  double t_crit = 40.0;
  double t_ambient = 20.0;
  // Energy normalisation ceiling: top of the Q-table energy bins, the
  // degraded-mode threshold reference, and the heatmap scale.
  double energy_cap = 5.0;
  ActionTable action_costs{0.01, 0.3, 0.1};
  ActionTable action_heat{0.0, 2.0, 0.5};
  ActionTable gain_factors{1.0, 0.6, 0.3};
  int max_steps = 200;

  int cells() const { return width * height; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
};

namespace detail {

inline void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) throw ConfigError(key, msg);
}

inline void validate_field(const FieldSpec& f, const std::string& key) {
  for (const auto& term : f.terms) {
    if (const auto* g = std::get_if<GaussianHotspots>(&term)) {
      for (const auto& h : g->hotspots) {
        require(std::isfinite(h.sigma) && h.sigma > 0.0, key + ".sigma", "must be > 0");
        require(std::isfinite(h.amplitude) && std::isfinite(h.cx) && std::isfinite(h.cy), key,
                "hotspot values must be finite");
      }
    }
  }
  if (const auto* s = std::get_if<SinusoidalTemporal>(&f.temporal)) {
    require(std::isfinite(s->period) && s->period > 0.0, key + ".temporal.period", "must be > 0");
    require(s->amplitude_fraction >= 0.0 && s->amplitude_fraction <= 1.0,
            key + ".temporal.amplitude_fraction", "must be in [0,1]");
  }
}

inline void validate_table(const ActionTable& t, const std::string& key, bool unit_interval) {
  const auto check = [&](double v, const char* name) {
    if (unit_interval)
      require(v >= 0.0 && v <= 1.0, key + "." + name, "must be in [0,1]");
    else
      require(std::isfinite(v) && v >= 0.0, key + "." + name, "must be >= 0");
  };
  check(t.idle, "idle");
  check(t.compute, "compute");
  check(t.move, "move");
}

}  // namespace detail

/// Throws ConfigError naming the first violated field.
inline void validate(const EnvironmentSpec& s) {
  using detail::require;
  require(s.width >= 1, "environment.width", "must be >= 1");
  require(s.height >= 1, "environment.height", "must be >= 1");
  require(s.max_steps >= 1, "environment.max_steps", "must be >= 1");
  require(s.eta >= 0.0 && s.eta <= 1.0, "environment.eta", "must be in [0,1]");
  require(std::isfinite(s.alpha) && s.alpha >= 0.0, "environment.alpha", "must be >= 0");
  require(std::isfinite(s.beta) && s.beta >= 0.0, "environment.beta", "must be >= 0");
  require(std::isfinite(s.t_ambient), "environment.t_ambient", "must be finite");
  require(std::isfinite(s.t_crit) && s.t_crit > s.t_ambient, "environment.t_crit",
          "must exceed t_ambient");
  require(std::isfinite(s.energy_cap) && s.energy_cap > 0.0, "environment.energy_cap",
          "must be > 0");
  detail::validate_table(s.action_costs, "environment.action_costs", false);
  detail::validate_table(s.action_heat, "environment.action_heat", false);
  detail::validate_table(s.gain_factors, "environment.gain_factors", true);
  detail::validate_field(s.harvest_field, "environment.harvest_field");
  detail::validate_field(s.dissipation_field, "environment.dissipation_field");
}

namespace detail {

inline void check_bounds(const EnvironmentSpec& s, int x, int y) {
  if (x < 0 || x >= s.width)
    throw BoundsError("x", "x=" + std::to_string(x) + " outside [0," + std::to_string(s.width) + ")");
  if (y < 0 || y >= s.height)
    throw BoundsError("y",
                      "y=" + std::to_string(y) + " outside [0," + std::to_string(s.height) + ")");
}

}  // namespace detail

/// Harvest potential P(x, y) at timestep t. Always >= 0.
inline double potential_at(const EnvironmentSpec& s, int x, int y, std::int64_t t = 0) {
  detail::check_bounds(s, x, y);
  return evaluate_field(s.harvest_field, x, y, t);
}

/// Cooling potential D(x, y). Always >= 0.
inline double dissipation_at(const EnvironmentSpec& s, int x, int y, std::int64_t t = 0) {
  detail::check_bounds(s, x, y);
  return evaluate_field(s.dissipation_field, x, y, t);
}

// ---------------------------------------------------------------------------
// Content digest
// ---------------------------------------------------------------------------

namespace detail {

class CanonicalWriter {
 public:
  void num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    text_ += buf;
  }
  void tag(const char* t) {
    text_ += t;
    text_ += ':';
  }
  void field(const FieldSpec& f) {
    tag("field");
    for (const auto& term : f.terms) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantField>) {
              tag("const");
              num(v.value);
            } else if constexpr (std::is_same_v<T, GaussianHotspots>) {
              tag("gauss");
              for (const auto& h : v.hotspots) {
                num(h.cx);
                num(h.cy);
                num(h.amplitude);
                num(h.sigma);
              }
            } else {
              tag("linear");
              num(v.base);
              num(v.dx);
              num(v.dy);
            }
          },
          term);
    }
    if (const auto* s = std::get_if<SinusoidalTemporal>(&f.temporal)) {
      tag("sin");
      num(s->period);
      num(s->amplitude_fraction);
    } else {
      tag("static");
    }
  }
  void table(const ActionTable& t) {
    num(t.idle);
    num(t.compute);
    num(t.move);
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace detail

/// Stable 64-bit FNV-1a hash (hex) of every environment field.
inline std::string digest(const EnvironmentSpec& s) {
  detail::CanonicalWriter w;
  w.tag("env-v1");
  w.num(s.width);
  w.num(s.height);
  w.field(s.harvest_field);
  w.field(s.dissipation_field);
  w.num(s.eta);
  w.num(s.alpha);
  w.num(s.beta);
  w.num(s.t_crit);
  w.num(s.t_ambient);
  w.num(s.energy_cap);
  w.table(s.action_costs);
  w.table(s.action_heat);
  w.table(s.gain_factors);
  w.num(s.max_steps);
  return detail::hex64(detail::fnv1a64(w.text()));
}

}  // namespace energentic
