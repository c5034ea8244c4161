// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xminigrid/core.hpp"

namespace xmg {

enum class RuleKind : std::uint8_t {
  Empty = 0,
  AgentHold = 1,
  AgentNear = 2,
  TileNear = 3,
  TileNearUp = 4,
  TileNearRight = 5,
  TileNearDown = 6,
  TileNearLeft = 7,
  AgentNearUp = 8,
  AgentNearRight = 9,
  AgentNearDown = 10,
  AgentNearLeft = 11,
};
inline constexpr int kNumRuleKinds = 12;

enum class GoalKind : std::uint8_t {
  Empty = 0,
  AgentHold = 1,
  AgentOnTile = 2,
  AgentNear = 3,
  TileNear = 4,
  AgentOnPosition = 5,
  TileOnPosition = 6,
  TileNearUp = 7,
  TileNearRight = 8,
  TileNearDown = 9,
  TileNearLeft = 10,
  AgentNearUp = 11,
  AgentNearRight = 12,
  AgentNearDown = 13,
  AgentNearLeft = 14,
};
inline constexpr int kNumGoalKinds = 15;

/// [rule_id, in_a, in_b, out_c]; unused slots are zero.
using RuleEncoding = std::array<std::uint8_t, 4>;
/// [goal_id, arg1, arg2, arg3]; entity codes or (x = col, y = row) coordinates.
using GoalEncoding = std::array<std::uint8_t, 4>;

inline constexpr RuleEncoding kEmptyRuleEncoding{0, 0, 0, 0};
inline constexpr GoalEncoding kEmptyGoalEncoding{0, 0, 0, 0};

constexpr int rule_arity(RuleKind k) noexcept {
  switch (k) {
    case RuleKind::Empty: return 0;
    case RuleKind::TileNear:
    case RuleKind::TileNearUp:
    case RuleKind::TileNearRight:
    case RuleKind::TileNearDown:
    case RuleKind::TileNearLeft: return 2;
    default: return 1;
  }
}

constexpr bool is_tile_near_rule(RuleKind k) noexcept {
  return k >= RuleKind::TileNear && k <= RuleKind::TileNearLeft;
}

/// Decoded production rule. For single-input rules `b` is unused.
struct Rule {
  RuleKind kind = RuleKind::Empty;
  Entity a = kEndOfMap;
  Entity b = kEndOfMap;
  Entity c = kEndOfMap;

  static Rule empty() { return {}; }
  static Rule agent_hold(Entity a, Entity c) { return {RuleKind::AgentHold, a, kEndOfMap, c}; }
  static Rule agent_near(Entity a, Entity c) { return {RuleKind::AgentNear, a, kEndOfMap, c}; }
  static Rule tile_near(Entity a, Entity b, Entity c) { return {RuleKind::TileNear, a, b, c}; }

  friend constexpr bool operator==(const Rule&, const Rule&) = default;
};

/// Decoded goal. `a`/`b` are entity arguments; `x`/`y` are column/row for
/// the position goals.
struct Goal {
  GoalKind kind = GoalKind::Empty;
  Entity a = kEndOfMap;
  Entity b = kEndOfMap;
  int x = 0;
  int y = 0;

  static Goal empty() { return {}; }
  static Goal agent_hold(Entity a) { return {GoalKind::AgentHold, a}; }
  static Goal agent_on_tile(Entity a) { return {GoalKind::AgentOnTile, a}; }
  static Goal agent_near(Entity a) { return {GoalKind::AgentNear, a}; }
  static Goal tile_near(Entity a, Entity b) { return {GoalKind::TileNear, a, b}; }
  static Goal agent_on_position(int x, int y) { return {GoalKind::AgentOnPosition, kEndOfMap, kEndOfMap, x, y}; }
  static Goal tile_on_position(Entity a, int x, int y) { return {GoalKind::TileOnPosition, a, kEndOfMap, x, y}; }

  friend constexpr bool operator==(const Goal&, const Goal&) = default;
};

/// Number of entity arguments a goal carries.
constexpr int goal_entity_arity(GoalKind k) noexcept {
  switch (k) {
    case GoalKind::Empty:
    case GoalKind::AgentOnPosition: return 0;
    case GoalKind::TileNear:
    case GoalKind::TileNearUp:
    case GoalKind::TileNearRight:
    case GoalKind::TileNearDown:
    case GoalKind::TileNearLeft: return 2;
    default: return 1;
  }
}

namespace detail {
inline Entity decode_arg(std::uint8_t code, const char* what) {
  if (!is_valid_code(code)) throw InvalidEncoding(std::string(what) + " has invalid entity code " + std::to_string(code));
  return Entity{static_cast<Tile>(code / 16), static_cast<Color>(code % 16)};
}
inline void require_zero(std::uint8_t v, const char* what) {
  if (v != 0) throw InvalidEncoding(std::string(what) + " must be zero padding, got " + std::to_string(v));
}
}  // namespace detail

inline RuleEncoding encode_rule(const Rule& r) {
  const int arity = rule_arity(r.kind);
  if (static_cast<int>(r.kind) >= kNumRuleKinds) throw InvalidEncoding("unknown rule kind");
  if (arity == 0) return kEmptyRuleEncoding;
  return {static_cast<std::uint8_t>(r.kind), pack_entity(r.a), arity == 2 ? pack_entity(r.b) : std::uint8_t{0},
          pack_entity(r.c)};
}

inline Rule decode_rule(const RuleEncoding& e) {
  if (e[0] >= kNumRuleKinds) throw InvalidEncoding("unknown rule id " + std::to_string(e[0]));
  const auto kind = static_cast<RuleKind>(e[0]);
  const int arity = rule_arity(kind);
  if (arity == 0) {
    detail::require_zero(e[1], "EmptyRule slot 1");
    detail::require_zero(e[2], "EmptyRule slot 2");
    detail::require_zero(e[3], "EmptyRule slot 3");
    return Rule::empty();
  }
  Rule r;
  r.kind = kind;
  r.a = detail::decode_arg(e[1], "rule input a");
  if (arity == 2) {
    r.b = detail::decode_arg(e[2], "rule input b");
  } else {
    detail::require_zero(e[2], "single-input rule slot b");
  }
  r.c = detail::decode_arg(e[3], "rule output c");
  return r;
}

inline GoalEncoding encode_goal(const Goal& g) {
  if (static_cast<int>(g.kind) >= kNumGoalKinds) throw InvalidEncoding("unknown goal kind");
  const auto id = static_cast<std::uint8_t>(g.kind);
  auto coord = [](int v, const char* what) {
    if (v < 0 || v >= kMaxGridSize) throw InvalidEncoding(std::string(what) + " coordinate out of range");
    return static_cast<std::uint8_t>(v);
  };
  switch (g.kind) {
    case GoalKind::Empty: return kEmptyGoalEncoding;
    case GoalKind::AgentOnPosition: return {id, coord(g.x, "x"), coord(g.y, "y"), 0};
    case GoalKind::TileOnPosition: return {id, pack_entity(g.a), coord(g.x, "x"), coord(g.y, "y")};
    default:
      if (goal_entity_arity(g.kind) == 2) return {id, pack_entity(g.a), pack_entity(g.b), 0};
      return {id, pack_entity(g.a), 0, 0};
  }
}

inline Goal decode_goal(const GoalEncoding& e) {
  if (e[0] >= kNumGoalKinds) throw InvalidEncoding("unknown goal id " + std::to_string(e[0]));
  Goal g;
  g.kind = static_cast<GoalKind>(e[0]);
  auto coord = [](std::uint8_t v, const char* what) {
    if (v >= kMaxGridSize) throw InvalidEncoding(std::string(what) + " coordinate out of range");
    return static_cast<int>(v);
  };
  switch (g.kind) {
    case GoalKind::Empty:
      detail::require_zero(e[1], "EmptyGoal slot 1");
      detail::require_zero(e[2], "EmptyGoal slot 2");
      detail::require_zero(e[3], "EmptyGoal slot 3");
      return Goal::empty();
    case GoalKind::AgentOnPosition:
      g.x = coord(e[1], "x");
      g.y = coord(e[2], "y");
      detail::require_zero(e[3], "AgentOnPositionGoal slot 3");
      return g;
    case GoalKind::TileOnPosition:
      g.a = detail::decode_arg(e[1], "goal argument a");
      g.x = coord(e[2], "x");
      g.y = coord(e[3], "y");
      return g;
    default:
      g.a = detail::decode_arg(e[1], "goal argument a");
      if (goal_entity_arity(g.kind) == 2) {
        g.b = detail::decode_arg(e[2], "goal argument b");
      } else {
        detail::require_zero(e[2], "single-argument goal slot 2");
      }
      detail::require_zero(e[3], "goal slot 3");
      return g;
  }
}

/// One task: a goal, production rules and the objects placed at reset.
/// Rules and objects may carry tail padding (EmptyRule / code 0).
struct Ruleset {
  GoalEncoding goal = kEmptyGoalEncoding;
  std::vector<RuleEncoding> rules;
  std::vector<EntityCode> init_objects;

  std::size_t num_rules() const noexcept {
    std::size_t n = 0;
    for (const auto& r : rules) n += r[0] != 0;
    return n;
  }

  std::vector<Entity> objects() const {
    std::vector<Entity> out;
    for (auto c : init_objects)
      if (c != 0) out.push_back(unpack_entity(c));
    return out;
  }

  /// Pad (or verify) to fixed widths. Throws InvalidEncoding if too long.
  void pad_to(std::size_t max_rules, std::size_t max_objects) {
    if (num_rules() > max_rules || std::count_if(init_objects.begin(), init_objects.end(), [](auto c) { return c != 0; }) >
                                       static_cast<std::ptrdiff_t>(max_objects)) {
      throw InvalidEncoding("ruleset does not fit widths " + std::to_string(max_rules) + "/" +
                            std::to_string(max_objects));
    }
    std::erase(rules, kEmptyRuleEncoding);
    std::erase(init_objects, EntityCode{0});
    rules.resize(max_rules, kEmptyRuleEncoding);
    init_objects.resize(max_objects, 0);
  }

  friend bool operator==(const Ruleset&, const Ruleset&) = default;
};

enum class EventKind : std::uint8_t { Move, PickUp, PutDown, Toggle };

/// Emitted by an action that changed the state. `position` is the cell the
/// action acted on (new agent cell for Move, front cell otherwise).
constexpr std::string_view rule_kind_name(RuleKind k) noexcept {
  constexpr std::string_view names[kNumRuleKinds] = {
      "Empty",          "AgentHold",      "AgentNear",     "TileNear",      "TileNearUp",     "TileNearRight",
      "TileNearDown",   "TileNearLeft",   "AgentNearUp",   "AgentNearRight", "AgentNearDown", "AgentNearLeft"};
  const auto i = static_cast<std::size_t>(k);
  return i < kNumRuleKinds ? names[i] : std::string_view("?");
}

constexpr std::string_view goal_kind_name(GoalKind k) noexcept {
  constexpr std::string_view names[kNumGoalKinds] = {
      "Empty",        "AgentHold",     "AgentOnTile",  "AgentNear",      "TileNear",
      "AgentOnPosition", "TileOnPosition", "TileNearUp", "TileNearRight", "TileNearDown",
      "TileNearLeft", "AgentNearUp",   "AgentNearRight", "AgentNearDown", "AgentNearLeft"};
  const auto i = static_cast<std::size_t>(k);
  return i < kNumGoalKinds ? names[i] : std::string_view("?");
}

/// "RED BALL" style name of an entity.
inline std::string describe(Entity e) {
  return std::string(color_name(e.color)) + " " + std::string(tile_name(e.tile));
}

/// e.g. "TileNear(BLUE PYRAMID, PURPLE SQUARE) -> RED BALL".
inline std::string describe(const Rule& r) {
  if (r.kind == RuleKind::Empty) return "Empty";
  std::string out = std::string(rule_kind_name(r.kind)) + "(" + describe(r.a);
  if (rule_arity(r.kind) == 2) out += ", " + describe(r.b);
  return out + ") -> " + describe(r.c);
}

inline std::string describe(const Goal& g) {
  std::string out = std::string(goal_kind_name(g.kind)) + "(";
  const int n = goal_entity_arity(g.kind);
  if (n >= 1) out += describe(g.a);
  if (n == 2) out += ", " + describe(g.b);
  if (g.kind == GoalKind::AgentOnPosition || g.kind == GoalKind::TileOnPosition) {
    out += (n ? ", " : "") + std::string("x=") + std::to_string(g.x) + ", y=" + std::to_string(g.y);
  }
  return out + ")";
}

/// Goal, rules and objects, one item per line.
inline std::string describe(const Ruleset& rs) {
  std::string out = "goal: " + describe(decode_goal(rs.goal)) + "\n";
  for (const auto& r : rs.rules)
    if (r[0] != 0) out += "rule: " + describe(decode_rule(r)) + "\n";
  out += "objects:";
  for (Entity e : rs.objects()) out += " " + describe(e) + ",";
  if (out.back() == ',') out.pop_back();
  return out + "\n";
}

struct TriggerEvent {
  EventKind kind = EventKind::Move;
  Position position;
};

namespace detail {

inline bool triggers_rule(RuleKind k, EventKind e) noexcept {
  switch (k) {
    case RuleKind::Empty: return false;
    case RuleKind::AgentHold: return e == EventKind::PickUp;
    case RuleKind::TileNear:
    case RuleKind::TileNearUp:
    case RuleKind::TileNearRight:
    case RuleKind::TileNearDown:
    case RuleKind::TileNearLeft: return e == EventKind::PutDown;
    default: return e == EventKind::Move || e == EventKind::PickUp || e == EventKind::PutDown;
  }
}

inline bool triggers_goal(GoalKind k, EventKind e) noexcept {
  switch (k) {
    case GoalKind::Empty: return false;
    case GoalKind::AgentHold: return e == EventKind::PickUp;
    case GoalKind::TileNear:
    case GoalKind::TileOnPosition:
    case GoalKind::TileNearUp:
    case GoalKind::TileNearRight:
    case GoalKind::TileNearDown:
    case GoalKind::TileNearLeft: return e == EventKind::PutDown;
    default: return true;  // agent-relative goals, including after a door toggle
  }
}

// Neighbour offsets in scan order up, right, down, left.
inline constexpr Position kNeighbours[4] = {{-1, 0}, {0, 1}, {1, 0}, {0, -1}};

inline bool cell_is(const Grid& g, Position p, EntityCode code) noexcept {
  return g.in_bounds(p) && g.code(p) == code;
}

// First cell holding `a` (row-major) with `b` at one of `offsets`; returns
// positions of a and b.
inline std::optional<std::pair<Position, Position>> find_pair(const Grid& g, EntityCode a, EntityCode b,
                                                              std::span<const Position> offsets) noexcept {
  const auto cells = g.cells();
  const int w = g.width();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] != a) continue;
    const Position pa{static_cast<int>(i) / w, static_cast<int>(i) % w};
    for (Position off : offsets) {
      const Position pb = pa + off;
      if (cell_is(g, pb, b)) return std::pair{pa, pb};
    }
  }
  return std::nullopt;
}

inline std::span<const Position> directional(int dir_index) noexcept {
  return std::span<const Position>(&kNeighbours[dir_index], 1);
}

}  // namespace detail

/// Applies one rule if its condition holds. Returns true when it fired.
inline bool apply_rule(Grid& grid, AgentState& agent, const RuleEncoding& enc) noexcept {
  const auto kind = static_cast<RuleKind>(enc[0]);
  const EntityCode a = enc[1], b = enc[2], c = enc[3];
  const Entity out{static_cast<Tile>(c >> 4), static_cast<Color>(c & 0xF)};
  if (enc[0] >= kNumRuleKinds) return false;
  switch (kind) {
    case RuleKind::Empty: return false;
    case RuleKind::AgentHold:
      if (!agent.holding() || pack_entity(agent.pocket) != a) return false;
      // Disappearance into a black floor empties the pocket.
      agent.pocket = out.tile == Tile::FLOOR ? kEmpty : out;
      return true;
    case RuleKind::TileNear:
    case RuleKind::TileNearUp:
    case RuleKind::TileNearRight:
    case RuleKind::TileNearDown:
    case RuleKind::TileNearLeft: {
      const auto offsets = kind == RuleKind::TileNear
                               ? std::span<const Position>(detail::kNeighbours)
                               : detail::directional(static_cast<int>(kind) - static_cast<int>(RuleKind::TileNearUp));
      const auto match = detail::find_pair(grid, a, b, offsets);
      if (!match) return false;
      grid.set_code(match->first, c);
      grid.set(match->second, kFloor);
      return true;
    }
    default: {
      // AgentNear family.
      const auto offsets = kind == RuleKind::AgentNear
                               ? std::span<const Position>(detail::kNeighbours)
                               : detail::directional(static_cast<int>(kind) - static_cast<int>(RuleKind::AgentNearUp));
      for (Position off : offsets) {
        const Position p = agent.position + off;
        if (detail::cell_is(grid, p, a)) {
          grid.set_code(p, c);
          return true;
        }
      }
      return false;
    }
  }
}

/// One pass over `rules` in encoding order. Each rule gated on `event`
/// fires at most once and sees the effects of earlier rules. Returns the
/// number of rules that fired.
inline int apply_rules(Grid& grid, AgentState& agent, std::span<const RuleEncoding> rules,
                       const TriggerEvent& event) noexcept {
  int fired = 0;
  for (const auto& enc : rules) {
    if (!detail::triggers_rule(static_cast<RuleKind>(enc[0]), event.kind)) continue;
    fired += apply_rule(grid, agent, enc);
  }
  return fired;
}

/// Ungated goal predicate.
inline bool goal_holds(const Grid& grid, const AgentState& agent, const GoalEncoding& enc) noexcept {
  const auto kind = static_cast<GoalKind>(enc[0]);
  const EntityCode a = enc[1], b = enc[2];
  const Position ap = agent.position;
  switch (kind) {
    case GoalKind::Empty: return false;
    case GoalKind::AgentHold: return agent.holding() && pack_entity(agent.pocket) == a;
    case GoalKind::AgentOnTile: return grid.code(ap) == a;
    case GoalKind::AgentNear:
      for (Position off : detail::kNeighbours)
        if (detail::cell_is(grid, ap + off, a)) return true;
      return false;
    case GoalKind::TileNear: return detail::find_pair(grid, a, b, detail::kNeighbours).has_value();
    case GoalKind::AgentOnPosition: return ap.col == enc[1] && ap.row == enc[2];
    case GoalKind::TileOnPosition: return detail::cell_is(grid, {enc[3], enc[2]}, a);
    case GoalKind::TileNearUp:
    case GoalKind::TileNearRight:
    case GoalKind::TileNearDown:
    case GoalKind::TileNearLeft:
      return detail::find_pair(grid, a, b,
                               detail::directional(static_cast<int>(kind) - static_cast<int>(GoalKind::TileNearUp)))
          .has_value();
    case GoalKind::AgentNearUp:
    case GoalKind::AgentNearRight:
    case GoalKind::AgentNearDown:
    case GoalKind::AgentNearLeft:
      return detail::cell_is(grid, ap + detail::kNeighbours[static_cast<int>(kind) - static_cast<int>(GoalKind::AgentNearUp)],
                             a);
  }
  return false;
}

/// Goal check gated on the triggering event.
inline bool check_goal(const Grid& grid, const AgentState& agent, const GoalEncoding& enc,
                       const TriggerEvent& event) noexcept {
  return detail::triggers_goal(static_cast<GoalKind>(enc[0]), event.kind) && goal_holds(grid, agent, enc);
}

}  // namespace xmg
