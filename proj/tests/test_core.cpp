// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <set>

#include "xminigrid/core.hpp"

using namespace xmg;

TEST(Entity, PackExamples) {
  EXPECT_EQ(pack_entity({Tile::KEY, Color::RED}), 147);
  EXPECT_EQ(pack_entity({Tile::END_OF_MAP, Color::END_OF_MAP}), 0);
  EXPECT_EQ(pack_entity({Tile::STAR, Color::PINK}), 237);
}

TEST(Entity, UnpackExamples) {
  EXPECT_EQ(unpack_entity(147), (Entity{Tile::KEY, Color::RED}));
  EXPECT_EQ(unpack_entity(0), (Entity{Tile::END_OF_MAP, Color::END_OF_MAP}));
  EXPECT_THROW(unpack_entity(255), InvalidCode);
  EXPECT_THROW(unpack_entity(14 * 16 + 14), InvalidCode);  // color 14 out of range
  EXPECT_THROW(unpack_entity(256), InvalidCode);
}

TEST(Entity, PackUnpackBijectionExhaustive) {
  std::set<int> codes;
  for (int t = 0; t < kNumTiles; ++t) {
    for (int c = 0; c < kNumColors; ++c) {
      const Entity e{static_cast<Tile>(t), static_cast<Color>(c)};
      const EntityCode code = pack_entity(e);
      EXPECT_EQ(unpack_entity(code), e);
      codes.insert(code);
    }
  }
  EXPECT_EQ(codes.size(), 15u * 14u);
  // Every other byte is rejected.
  int valid = 0;
  for (int code = 0; code < 256; ++code) valid += is_valid_code(code);
  EXPECT_EQ(valid, 15 * 14);
}

TEST(Entity, Pickable) {
  for (Tile t : {Tile::BALL, Tile::SQUARE, Tile::PYRAMID, Tile::KEY, Tile::HEX, Tile::STAR, Tile::GOAL})
    EXPECT_TRUE(is_pickable(t)) << tile_name(t);
  for (Tile t : {Tile::WALL, Tile::FLOOR, Tile::DOOR_OPEN, Tile::DOOR_CLOSED, Tile::DOOR_LOCKED, Tile::EMPTY})
    EXPECT_FALSE(is_pickable(t)) << tile_name(t);
}

TEST(Direction, TurnsWrap) {
  EXPECT_EQ(turn_right(Direction::LEFT), Direction::UP);
  EXPECT_EQ(turn_left(Direction::UP), Direction::LEFT);
  for (int d = 0; d < 4; ++d) {
    const auto dir = static_cast<Direction>(d);
    EXPECT_EQ(turn_left(turn_right(dir)), dir);
    EXPECT_EQ(static_cast<int>(turn_right(dir)), (d + 1) % 4);
  }
}

TEST(Grid, BorderedIsWalled) {
  const Grid g = Grid::bordered(9, 9);
  for (int i = 0; i < 9; ++i) {
    EXPECT_EQ(g.at(0, i), kWall);
    EXPECT_EQ(g.at(8, i), kWall);
    EXPECT_EQ(g.at(i, 0), kWall);
    EXPECT_EQ(g.at(i, 8), kWall);
  }
  EXPECT_EQ(g.free_cells().size(), 49u);
  EXPECT_THROW(Grid(256, 4), LayoutTooSmall);
}

TEST(PlaceObjects, EmptyListIsIdentity) {
  const Grid g = Grid::bordered(9, 9);
  EXPECT_EQ(place_objects(g, {}, Rng::from_seed(1)), g);
}

TEST(PlaceObjects, DeterministicAndDistinct) {
  const Grid g = Grid::bordered(9, 9);
  const std::vector<Entity> objs = {{Tile::BALL, Color::RED}, {Tile::KEY, Color::BLUE}, {Tile::STAR, Color::PINK}};
  const Grid a = place_objects(g, objs, Rng::from_seed(7));
  const Grid b = place_objects(g, objs, Rng::from_seed(7));
  EXPECT_EQ(a, b);
  int occupied = 0;
  for (int r = 1; r < 8; ++r)
    for (int c = 1; c < 8; ++c) occupied += a.at(r, c) != kFloor;
  EXPECT_EQ(occupied, 3);
  EXPECT_EQ(a.free_cells().size(), 46u);
  for (const auto& o : objs) {
    EXPECT_EQ(std::count(a.cells().begin(), a.cells().end(), pack_entity(o)), 1);
  }
}

TEST(PlaceObjects, NeverOverwritesWallsDoorsOrObjects) {
  Grid g = Grid::bordered(7, 7);
  g.vertical_wall(3, 0, 6);
  g.set(3, 3, {Tile::DOOR_CLOSED, Color::RED});
  g.set(1, 1, {Tile::BALL, Color::GREEN});
  const Grid before = g;
  std::vector<Entity> objs(19, Entity{Tile::HEX, Color::BLUE});  // fills every free cell (5*4 - 1)
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Grid after = place_objects(before, objs, Rng::from_seed(seed));
    for (int r = 0; r < 7; ++r)
      for (int c = 0; c < 7; ++c)
        if (before.tile({r, c}) != Tile::FLOOR) {
          EXPECT_EQ(after.at(r, c), before.at(r, c));
        }
    EXPECT_TRUE(after.free_cells().empty());
  }
}

TEST(PlaceObjects, GridFull) {
  const Grid g = Grid::bordered(5, 5);
  std::vector<Entity> objs(10, Entity{Tile::BALL, Color::RED});
  EXPECT_THROW(place_objects(g, objs, Rng::from_seed(0)), GridFull);
}
