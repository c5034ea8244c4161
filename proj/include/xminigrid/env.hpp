// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "xminigrid/core.hpp"
#include "xminigrid/layouts.hpp"
#include "xminigrid/observation.hpp"
#include "xminigrid/rng.hpp"
#include "xminigrid/rules.hpp"

namespace xmg {

enum class Action : std::uint8_t {
  MoveForward = 0,
  TurnLeft = 1,
  TurnRight = 2,
  PickUp = 3,
  PutDown = 4,
  Toggle = 5,
};
inline constexpr int kNumActions = 6;

enum class StepType : std::uint8_t { FIRST = 0, MID = 1, LAST = 2 };

/// Which reset procedure builds the world. XLand draws objects from the
/// ruleset onto a multi-room layout; the others are MiniGrid ports with
/// their own fixed goal and placement.
enum class EnvKind : std::uint8_t { XLand, Empty, EmptyRandom, DoorKey, FourRooms, Unlock, UnlockPickUp };

struct EnvParams {
  Layout layout = Layout::R1;
  int height = 9;
  int width = 9;
  int view_size = 5;
  int max_steps = 3 * 9 * 9;
  bool see_through_walls = false;
  Ruleset ruleset;

  static int default_max_steps(int height, int width) noexcept { return 3 * height * width; }
};

struct EnvState {
  Grid grid;
  AgentState agent;
  Ruleset ruleset;
  int step_count = 0;
  bool goal_reached = false;
  Rng rng;

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct TimeStep {
  Observation observation;
  float reward = 0.0f;
  float discount = 1.0f;
  StepType step_type = StepType::FIRST;
  EnvState state;

  bool first() const noexcept { return step_type == StepType::FIRST; }
  bool mid() const noexcept { return step_type == StepType::MID; }
  bool last() const noexcept { return step_type == StepType::LAST; }

  friend bool operator==(const TimeStep&, const TimeStep&) = default;
};

/// FNV-1a over every field of the state, including the PRNG key.
inline std::uint64_t hash_state(const EnvState& s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ull;
    }
  };
  mix(static_cast<std::uint64_t>(s.grid.height()), 2);
  mix(static_cast<std::uint64_t>(s.grid.width()), 2);
  for (auto c : s.grid.cells()) mix(c, 1);
  mix(static_cast<std::uint64_t>(s.agent.position.row), 2);
  mix(static_cast<std::uint64_t>(s.agent.position.col), 2);
  mix(static_cast<std::uint64_t>(s.agent.direction), 1);
  mix(pack_entity(s.agent.pocket), 1);
  for (auto b : s.ruleset.goal) mix(b, 1);
  for (const auto& r : s.ruleset.rules)
    for (auto b : r) mix(b, 1);
  for (auto c : s.ruleset.init_objects) mix(c, 1);
  mix(static_cast<std::uint64_t>(s.step_count), 4);
  mix(s.goal_reached, 1);
  mix(s.rng.key()[0], 8);
  mix(s.rng.key()[1], 8);
  return h;
}

/// Applies the action's physics. Returns the triggering event when the
/// action changed the state.
inline std::optional<TriggerEvent> apply_action(Grid& grid, AgentState& agent, Action action) noexcept {
  const Position front = agent.position + direction_offset(agent.direction);
  const bool in_bounds = grid.in_bounds(front);
  switch (action) {
    case Action::MoveForward:
      if (in_bounds && is_walkable(grid.tile(front))) {
        agent.position = front;
        return TriggerEvent{EventKind::Move, front};
      }
      return std::nullopt;
    case Action::TurnLeft: agent.direction = turn_left(agent.direction); return std::nullopt;
    case Action::TurnRight: agent.direction = turn_right(agent.direction); return std::nullopt;
    case Action::PickUp:
      if (!agent.holding() && in_bounds && is_pickable(grid.tile(front))) {
        agent.pocket = grid.at(front);
        grid.set(front, kFloor);
        return TriggerEvent{EventKind::PickUp, front};
      }
      return std::nullopt;
    case Action::PutDown:
      if (agent.holding() && in_bounds && grid.tile(front) == Tile::FLOOR) {
        grid.set(front, agent.pocket);
        agent.pocket = kEmpty;
        return TriggerEvent{EventKind::PutDown, front};
      }
      return std::nullopt;
    case Action::Toggle: {
      if (!in_bounds) return std::nullopt;
      const Entity e = grid.at(front);
      if (e.tile == Tile::DOOR_CLOSED) {
        grid.set(front, {Tile::DOOR_OPEN, e.color});
      } else if (e.tile == Tile::DOOR_OPEN) {
        grid.set(front, {Tile::DOOR_CLOSED, e.color});
      } else if (e.tile == Tile::DOOR_LOCKED && agent.pocket == Entity{Tile::KEY, e.color}) {
        grid.set(front, {Tile::DOOR_OPEN, e.color});
      } else {
        return std::nullopt;
      }
      return TriggerEvent{EventKind::Toggle, front};
    }
  }
  return std::nullopt;
}

inline Action to_action(int value) {
  if (value < 0 || value >= kNumActions) throw InvalidAction("action " + std::to_string(value) + " not in [0, 6)");
  return static_cast<Action>(value);
}

/// Stateless environment: all dynamics live in (EnvParams, TimeStep).
class Environment {
 public:
  Environment() = default;
  explicit Environment(EnvKind kind) : kind_(kind) {}

  EnvKind kind() const noexcept { return kind_; }
  int num_actions(const EnvParams&) const noexcept { return kNumActions; }
  std::array<int, 3> observation_shape(const EnvParams& p) const noexcept { return {p.view_size, p.view_size, 2}; }

  TimeStep reset(const EnvParams& params, Rng key) const {
    TimeStep t;
    t.state = initial_state(params, key);
    t.step_type = StepType::FIRST;
    t.reward = 0.0f;
    t.discount = 1.0f;
    observe_into(t.state.grid, t.state.agent, params.view_size, params.see_through_walls, t.observation);
    return t;
  }

  /// In-place transition; the pure `step` is a copy plus this.
  void advance(const EnvParams& params, TimeStep& t, Action action) const {
    if (static_cast<int>(action) >= kNumActions) {
      throw InvalidAction("action " + std::to_string(static_cast<int>(action)) + " not in [0, 6)");
    }
    EnvState& s = t.state;
    bool goal = false;
    if (const auto event = apply_action(s.grid, s.agent, action)) {
      apply_rules(s.grid, s.agent, s.ruleset.rules, *event);
      goal = check_goal(s.grid, s.agent, s.ruleset.goal, *event);
    }
    s.step_count += 1;
    s.goal_reached = goal;
    if (goal) {
      t.reward = 1.0f - 0.9f * (static_cast<float>(s.step_count) / static_cast<float>(params.max_steps));
      t.discount = 0.0f;
      t.step_type = StepType::LAST;
    } else if (s.step_count >= params.max_steps) {
      t.reward = 0.0f;
      t.discount = 0.0f;
      t.step_type = StepType::LAST;
    } else {
      t.reward = 0.0f;
      t.discount = 1.0f;
      t.step_type = StepType::MID;
    }
    observe_into(s.grid, s.agent, params.view_size, params.see_through_walls, t.observation);
  }

  TimeStep step(const EnvParams& params, TimeStep t, Action action) const {
    advance(params, t, action);
    return t;
  }

  TimeStep step(const EnvParams& params, const TimeStep& t, int action) const {
    return step(params, t, to_action(action));
  }

  /// Starts the next trial when `t` is LAST, keeping the state's ruleset;
  /// otherwise returns `t` unchanged. The key comes from the state's PRNG.
  TimeStep auto_reset(const EnvParams& params, const TimeStep& t) const {
    if (!t.last()) return t;
    return auto_reset(params, t, t.state.rng.child(0));
  }

  TimeStep auto_reset(const EnvParams& params, const TimeStep& t, Rng key) const {
    if (!t.last()) return t;
    if (kind_ != EnvKind::XLand || params.ruleset == t.state.ruleset) return reset(params, key);
    EnvParams same_task = params;
    same_task.ruleset = t.state.ruleset;
    return reset(same_task, key);
  }

  Observation observe(const EnvState& s, const EnvParams& params) const {
    return xmg::observe(s.grid, s.agent, params.view_size, params.see_through_walls);
  }

  EnvState initial_state(const EnvParams& params, Rng key) const;

 private:
  EnvKind kind_ = EnvKind::XLand;
};

/// Builds a TimeStep (FIRST) around a hand-constructed state.
inline TimeStep make_timestep(const EnvParams& params, EnvState state) {
  TimeStep t;
  t.state = std::move(state);
  observe_into(t.state.grid, t.state.agent, params.view_size, params.see_through_walls, t.observation);
  return t;
}

namespace detail {

inline Position random_cell(const Grid& grid, RandomStream& stream, int col_lo, int col_hi) {
  std::vector<Position> cells;
  for (int r = 0; r < grid.height(); ++r)
    for (int c = col_lo; c <= col_hi; ++c)
      if (grid.tile({r, c}) == Tile::FLOOR) cells.push_back({r, c});
  if (cells.empty()) throw GridFull("no free cell for placement");
  return cells[stream.uniform(cells.size())];
}

inline Direction random_direction(RandomStream& stream) { return static_cast<Direction>(stream.uniform(4)); }

inline Color random_color(RandomStream& stream) { return kObjectColors[stream.uniform(kObjectColors.size())]; }

inline constexpr Entity kGreenGoal{Tile::GOAL, Color::GREEN};

}  // namespace detail

inline EnvState Environment::initial_state(const EnvParams& params, Rng key) const {
  const auto [layout_key, objects_key, agent_key, next_key] = key.split<4>();
  EnvState s;
  s.rng = next_key;
  auto stream = agent_key.stream();
  const int h = params.height, w = params.width;

  switch (kind_) {
    case EnvKind::XLand: {
      s.grid = build_layout(params.layout, h, w, layout_key);
      s.ruleset = params.ruleset;
      const auto objects = s.ruleset.objects();
      const auto free = static_cast<std::size_t>(
          std::count_if(s.grid.cells().begin(), s.grid.cells().end(), [](EntityCode c) { return (c >> 4) == 3; }));
      if (objects.size() + 1 > free) {
        throw GridFull(std::to_string(objects.size()) + " objects plus agent exceed " + std::to_string(free) +
                       " free cells");
      }
      scatter_objects(s.grid, objects, objects_key);
      s.agent.position = detail::random_cell(s.grid, stream, 0, w - 1);
      s.agent.direction = detail::random_direction(stream);
      break;
    }
    case EnvKind::Empty:
    case EnvKind::EmptyRandom: {
      s.grid = Grid::bordered(h, w);
      s.grid.set(h - 2, w - 2, detail::kGreenGoal);
      s.ruleset.goal = encode_goal(Goal::agent_on_tile(detail::kGreenGoal));
      if (kind_ == EnvKind::Empty) {
        s.agent.position = {1, 1};
        s.agent.direction = Direction::RIGHT;
      } else {
        s.agent.position = detail::random_cell(s.grid, stream, 0, w - 1);
        s.agent.direction = detail::random_direction(stream);
      }
      break;
    }
    case EnvKind::DoorKey: {
      if (h < 5 || w < 5) throw LayoutTooSmall("DoorKey needs at least 5x5");
      s.grid = Grid::bordered(h, w);
      s.grid.set(h - 2, w - 2, detail::kGreenGoal);
      const int split = static_cast<int>(stream.uniform_int(2, w - 3));
      s.grid.vertical_wall(split, 0, h - 1);
      const int door_row = static_cast<int>(stream.uniform_int(1, h - 2));
      s.grid.set(door_row, split, Entity{Tile::DOOR_LOCKED, Color::YELLOW});
      const Position key_pos = detail::random_cell(s.grid, stream, 1, split - 1);
      s.grid.set(key_pos, Entity{Tile::KEY, Color::YELLOW});
      s.agent.position = detail::random_cell(s.grid, stream, 1, split - 1);
      s.agent.direction = detail::random_direction(stream);
      s.ruleset.goal = encode_goal(Goal::agent_on_tile(detail::kGreenGoal));
      break;
    }
    case EnvKind::FourRooms: {
      // Same wall structure as R4 but with open gaps instead of doors.
      s.grid = build_layout(Layout::R4, h, w, layout_key);
      for (auto& c : s.grid.cells())
        if ((c >> 4) == static_cast<int>(Tile::DOOR_CLOSED)) c = pack_entity(kFloor);
      const Position goal_pos = detail::random_cell(s.grid, stream, 0, w - 1);
      s.grid.set(goal_pos, detail::kGreenGoal);
      s.agent.position = detail::random_cell(s.grid, stream, 0, w - 1);
      s.agent.direction = detail::random_direction(stream);
      s.ruleset.goal = encode_goal(Goal::agent_on_tile(detail::kGreenGoal));
      break;
    }
    case EnvKind::Unlock:
    case EnvKind::UnlockPickUp: {
      // Two rooms side by side; locked door with the matching key on the left.
      if (h < 5 || w < 9) throw LayoutTooSmall("Unlock needs at least 5x9");
      s.grid = Grid::bordered(h, w);
      const int split = w / 2;
      s.grid.vertical_wall(split, 0, h - 1);
      const Color door_color = detail::random_color(stream);
      const int door_row = static_cast<int>(stream.uniform_int(1, h - 2));
      s.grid.set(door_row, split, Entity{Tile::DOOR_LOCKED, door_color});
      s.grid.set(detail::random_cell(s.grid, stream, 1, split - 1), Entity{Tile::KEY, door_color});
      if (kind_ == EnvKind::UnlockPickUp) {
        const Entity box{Tile::SQUARE, detail::random_color(stream)};
        s.grid.set(detail::random_cell(s.grid, stream, split + 1, w - 2), box);
        s.ruleset.goal = encode_goal(Goal::agent_hold(box));
      } else {
        s.ruleset.goal = encode_goal(Goal::agent_near(Entity{Tile::DOOR_OPEN, door_color}));
      }
      s.agent.position = detail::random_cell(s.grid, stream, 1, split - 1);
      s.agent.direction = detail::random_direction(stream);
      break;
    }
  }
  return s;
}

}  // namespace xmg
