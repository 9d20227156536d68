#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace energentic {

enum class ActionKind { idle, move, compute };
enum class Direction { north, east, south, west };

/// One of the three agent actions. `direction` is meaningful only for moves.
struct Action {
  ActionKind kind = ActionKind::idle;
  Direction direction = Direction::north;

  static constexpr Action idle() { return {ActionKind::idle, Direction::north}; }
  static constexpr Action compute() { return {ActionKind::compute, Direction::north}; }
  static constexpr Action move(Direction d) { return {ActionKind::move, d}; }

  friend constexpr bool operator==(const Action& a, const Action& b) {
    return a.kind == b.kind && (a.kind != ActionKind::move || a.direction == b.direction);
  }
};

inline constexpr std::size_t kNumActions = 6;

// Canonical order, also the argmax tie-break order: idle < N < E < S < W < compute.
inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::idle(),
    Action::move(Direction::north),
    Action::move(Direction::east),
    Action::move(Direction::south),
    Action::move(Direction::west),
    Action::compute(),
};

constexpr std::size_t action_index(const Action& a) {
  switch (a.kind) {
    case ActionKind::idle:
      return 0;
    case ActionKind::compute:
      return 5;
    case ActionKind::move:
      return 1 + static_cast<std::size_t>(a.direction);
  }
  return 0;
}

/// Grid offset for a move; y grows southward.
constexpr std::pair<int, int> direction_offset(Direction d) {
  switch (d) {
    case Direction::north:
      return {0, -1};
    case Direction::east:
      return {1, 0};
    case Direction::south:
      return {0, 1};
    case Direction::west:
      return {-1, 0};
  }
  return {0, 0};
}

/// Lowercase word used in CSV exports.
inline std::string to_string(const Action& a) {
  switch (a.kind) {
    case ActionKind::idle:
      return "idle";
    case ActionKind::compute:
      return "compute";
    case ActionKind::move:
      switch (a.direction) {
        case Direction::north:
          return "move_n";
        case Direction::east:
          return "move_e";
        case Direction::south:
          return "move_s";
        case Direction::west:
          return "move_w";
      }
  }
  return "idle";
}

inline std::optional<Action> parse_action(std::string_view word) {
  for (const auto& a : kAllActions) {
    if (to_string(a) == word) return a;
  }
  return std::nullopt;
}

}  // namespace energentic
