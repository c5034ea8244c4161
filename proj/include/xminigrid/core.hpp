// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xminigrid/errors.hpp"
#include "xminigrid/rng.hpp"

namespace xmg {

enum class Tile : std::uint8_t {
  END_OF_MAP = 0,
  UNSEEN = 1,
  EMPTY = 2,
  FLOOR = 3,
  WALL = 4,
  BALL = 5,
  SQUARE = 6,
  PYRAMID = 7,
  GOAL = 8,
  KEY = 9,
  DOOR_LOCKED = 10,
  DOOR_CLOSED = 11,
  DOOR_OPEN = 12,
  HEX = 13,
  STAR = 14,
};

enum class Color : std::uint8_t {
  END_OF_MAP = 0,
  UNSEEN = 1,
  EMPTY = 2,
  RED = 3,
  GREEN = 4,
  BLUE = 5,
  PURPLE = 6,
  YELLOW = 7,
  GREY = 8,
  BLACK = 9,
  ORANGE = 10,
  WHITE = 11,
  BROWN = 12,
  PINK = 13,
};

inline constexpr int kNumTiles = 15;
inline constexpr int kNumColors = 14;
inline constexpr int kMaxGridSize = 255;

constexpr std::string_view tile_name(Tile t) noexcept {
  constexpr std::string_view names[kNumTiles] = {
      "END_OF_MAP", "UNSEEN", "EMPTY", "FLOOR",       "WALL",        "BALL",      "SQUARE", "PYRAMID",
      "GOAL",       "KEY",    "DOOR_LOCKED", "DOOR_CLOSED", "DOOR_OPEN", "HEX", "STAR"};
  const auto i = static_cast<std::size_t>(t);
  return i < kNumTiles ? names[i] : std::string_view("?");
}

constexpr std::string_view color_name(Color c) noexcept {
  constexpr std::string_view names[kNumColors] = {"END_OF_MAP", "UNSEEN", "EMPTY",  "RED",    "GREEN",
                                                  "BLUE",       "PURPLE", "YELLOW", "GREY",   "BLACK",
                                                  "ORANGE",     "WHITE",  "BROWN",  "PINK"};
  const auto i = static_cast<std::size_t>(c);
  return i < kNumColors ? names[i] : std::string_view("?");
}

/// Single-byte packing of an entity: tile * 16 + color.
using EntityCode = std::uint8_t;

struct Entity {
  Tile tile = Tile::EMPTY;
  Color color = Color::EMPTY;

  friend constexpr bool operator==(const Entity&, const Entity&) = default;
};

constexpr EntityCode pack_entity(Entity e) noexcept {
  return static_cast<EntityCode>(static_cast<unsigned>(e.tile) * 16u + static_cast<unsigned>(e.color));
}

constexpr bool is_valid_code(unsigned code) noexcept {
  return code <= 0xFF && code / 16 < kNumTiles && code % 16 < kNumColors;
}

inline Entity unpack_entity(unsigned code) {
  if (!is_valid_code(code)) throw InvalidCode("entity code " + std::to_string(code) + " is out of range");
  return Entity{static_cast<Tile>(code / 16), static_cast<Color>(code % 16)};
}

inline constexpr Entity kFloor{Tile::FLOOR, Color::BLACK};
inline constexpr Entity kWall{Tile::WALL, Color::GREY};
inline constexpr Entity kEmpty{Tile::EMPTY, Color::EMPTY};
inline constexpr Entity kEndOfMap{Tile::END_OF_MAP, Color::END_OF_MAP};
inline constexpr Entity kUnseen{Tile::UNSEEN, Color::UNSEEN};

// GOAL counts as an object: the generator draws it from the same pool as the
// other six object tiles, so it must be movable for tasks to stay solvable.
constexpr bool is_pickable(Tile t) noexcept {
  switch (t) {
    case Tile::BALL:
    case Tile::SQUARE:
    case Tile::PYRAMID:
    case Tile::GOAL:
    case Tile::KEY:
    case Tile::HEX:
    case Tile::STAR:
      return true;
    default:
      return false;
  }
}

constexpr bool is_walkable(Tile t) noexcept {
  return t == Tile::FLOOR || t == Tile::GOAL || t == Tile::DOOR_OPEN;
}

constexpr bool is_opaque(Tile t) noexcept {
  return t == Tile::WALL || t == Tile::DOOR_CLOSED || t == Tile::DOOR_LOCKED;
}

/// The ten colors and seven tile types objects are drawn from.
inline constexpr std::array<Color, 10> kObjectColors = {Color::RED,    Color::GREEN, Color::BLUE,  Color::PURPLE,
                                                       Color::YELLOW, Color::GREY,  Color::WHITE, Color::BROWN,
                                                       Color::PINK,   Color::ORANGE};
inline constexpr std::array<Tile, 7> kObjectTiles = {Tile::BALL, Tile::SQUARE, Tile::PYRAMID, Tile::KEY,
                                                     Tile::STAR, Tile::HEX,    Tile::GOAL};

enum class Direction : std::uint8_t { UP = 0, RIGHT = 1, DOWN = 2, LEFT = 3 };

constexpr Direction turn_right(Direction d) noexcept {
  return static_cast<Direction>((static_cast<unsigned>(d) + 1u) % 4u);
}
constexpr Direction turn_left(Direction d) noexcept {
  return static_cast<Direction>((static_cast<unsigned>(d) + 3u) % 4u);
}

struct Position {
  int row = 0;
  int col = 0;

  friend constexpr bool operator==(const Position&, const Position&) = default;
  friend constexpr Position operator+(Position a, Position b) noexcept { return {a.row + b.row, a.col + b.col}; }
};

constexpr Position direction_offset(Direction d) noexcept {
  constexpr Position offsets[4] = {{-1, 0}, {0, 1}, {1, 0}, {0, -1}};
  return offsets[static_cast<unsigned>(d)];
}

/// Row-major H x W grid of entity codes with a WALL border.
class Grid {
 public:
  Grid() = default;

  Grid(int height, int width, Entity fill = kFloor) : height_(height), width_(width) {
    if (height < 1 || width < 1 || height > kMaxGridSize || width > kMaxGridSize) {
      throw LayoutTooSmall("grid dimensions " + std::to_string(height) + "x" + std::to_string(width) +
                           " outside [1, 255]");
    }
    cells_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), pack_entity(fill));
  }

  /// Interior filled with `fill`, outer ring WALL.
  static Grid bordered(int height, int width, Entity fill = kFloor) {
    Grid g(height, width, fill);
    g.fill_rect(0, 0, height, width, kWall);
    g.fill_rect(1, 1, height - 2, width - 2, fill);
    return g;
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }

  bool in_bounds(Position p) const noexcept { return p.row >= 0 && p.col >= 0 && p.row < height_ && p.col < width_; }

  EntityCode code(Position p) const noexcept { return cells_[index(p)]; }
  EntityCode code(int row, int col) const noexcept { return cells_[index({row, col})]; }
  Entity at(Position p) const noexcept { return decode(cells_[index(p)]); }
  Entity at(int row, int col) const noexcept { return at(Position{row, col}); }
  Tile tile(Position p) const noexcept { return static_cast<Tile>(cells_[index(p)] >> 4); }

  void set(Position p, Entity e) noexcept { cells_[index(p)] = pack_entity(e); }
  void set(int row, int col, Entity e) noexcept { set(Position{row, col}, e); }
  void set_code(Position p, EntityCode c) noexcept { cells_[index(p)] = c; }

  void fill_rect(int row, int col, int h, int w, Entity e) noexcept {
    for (int r = row; r < row + h; ++r)
      for (int c = col; c < col + w; ++c) set(r, c, e);
  }
  void horizontal_wall(int row, int col0, int col1) noexcept { fill_rect(row, col0, 1, col1 - col0 + 1, kWall); }
  void vertical_wall(int col, int row0, int row1) noexcept { fill_rect(row0, col, row1 - row0 + 1, 1, kWall); }

  std::span<const EntityCode> cells() const noexcept { return cells_; }
  std::span<EntityCode> cells() noexcept { return cells_; }

  /// Cells holding plain floor (FLOOR of any color), in row-major order.
  std::vector<Position> free_cells() const {
    std::vector<Position> out;
    for (int r = 0; r < height_; ++r)
      for (int c = 0; c < width_; ++c)
        if (tile({r, c}) == Tile::FLOOR) out.push_back({r, c});
    return out;
  }

  std::size_t index(Position p) const noexcept {
    return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(p.col);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static constexpr Entity decode(EntityCode c) noexcept {
    return Entity{static_cast<Tile>(c >> 4), static_cast<Color>(c & 0xF)};
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<EntityCode> cells_;
};

struct AgentState {
  Position position;
  Direction direction = Direction::UP;
  Entity pocket = kEmpty;

  bool holding() const noexcept { return pocket.tile != Tile::EMPTY; }

  friend constexpr bool operator==(const AgentState&, const AgentState&) = default;
};

/// Places each entity on a distinct FLOOR cell chosen by a seeded shuffle of
/// all free cells. `exclude` cells are never used. Returns the chosen cells.
inline std::vector<Position> scatter_objects(Grid& grid, std::span<const Entity> entities, Rng key,
                                           std::span<const Position> exclude = {}) {
  if (entities.empty()) return {};
  std::vector<Position> free = grid.free_cells();
  if (!exclude.empty()) {
    std::erase_if(free, [&](Position p) { return std::find(exclude.begin(), exclude.end(), p) != exclude.end(); });
  }
  if (entities.size() > free.size()) {
    throw GridFull(std::to_string(entities.size()) + " objects but only " + std::to_string(free.size()) +
                   " free cells");
  }
  auto stream = key.stream();
  // Partial Fisher-Yates: only the first |entities| slots are needed.
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(stream.uniform(free.size() - i));
    std::swap(free[i], free[j]);
    grid.set(free[i], entities[i]);
  }
  free.resize(entities.size());
  return free;
}

inline Grid place_objects(const Grid& grid, std::span<const Entity> entities, Rng key) {
  Grid out = grid;
  scatter_objects(out, entities, key);
  return out;
}

}  // namespace xmg
