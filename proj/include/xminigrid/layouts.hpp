// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "xminigrid/core.hpp"
#include "xminigrid/rng.hpp"

namespace xmg {

enum class Layout : std::uint8_t { R1 = 1, R2 = 2, R4 = 4, R6 = 6, R9 = 9 };

struct RoomGrid {
  int room_rows = 1;
  int room_cols = 1;
};

constexpr RoomGrid room_grid(Layout l) noexcept {
  switch (l) {
    case Layout::R1: return {1, 1};
    case Layout::R2: return {1, 2};
    case Layout::R4: return {2, 2};
    case Layout::R6: return {2, 3};
    case Layout::R9: return {3, 3};
  }
  return {1, 1};
}

/// Wall line coordinates splitting [0, n-1] into k rooms.
inline std::vector<int> wall_lines(int n, int k) {
  std::vector<int> out;
  for (int i = 0; i <= k; ++i) out.push_back(i * (n - 1) / k);
  return out;
}

inline constexpr int kMinRoomInterior = 3;

/// Multi-room layout. Each shared wall segment gets one closed door at a
/// random position with a random color; the six-room layout keeps its doors
/// at fixed (segment-centre) positions and only randomizes colors.
inline Grid build_layout(Layout layout, int height, int width, Rng key) {
  const auto [rr, rc] = room_grid(layout);
  const auto rows = wall_lines(height, rr);
  const auto cols = wall_lines(width, rc);
  auto too_small = [&](const std::vector<int>& lines) {
    for (std::size_t i = 0; i + 1 < lines.size(); ++i)
      if (lines[i + 1] - lines[i] - 1 < kMinRoomInterior) return true;
    return false;
  };
  if (height > kMaxGridSize || width > kMaxGridSize || too_small(rows) || too_small(cols)) {
    throw LayoutTooSmall(std::to_string(height) + "x" + std::to_string(width) + " cannot hold layout R" +
                         std::to_string(static_cast<int>(layout)));
  }

  Grid grid = Grid::bordered(height, width);
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) grid.horizontal_wall(rows[i], 0, width - 1);
  for (std::size_t j = 1; j + 1 < cols.size(); ++j) grid.vertical_wall(cols[j], 0, height - 1);

  const bool fixed_doors = layout == Layout::R6;
  auto stream = key.stream();
  auto door_at = [&](int lo, int hi) {
    return fixed_doors ? (lo + hi) / 2 : static_cast<int>(stream.uniform_int(lo, hi));
  };
  auto door_color = [&] { return kObjectColors[stream.uniform(kObjectColors.size())]; };

  for (std::size_t j = 1; j + 1 < cols.size(); ++j) {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const int r = door_at(rows[i] + 1, rows[i + 1] - 1);
      grid.set(r, cols[j], Entity{Tile::DOOR_CLOSED, door_color()});
    }
  }
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    for (std::size_t j = 0; j + 1 < cols.size(); ++j) {
      const int c = door_at(cols[j] + 1, cols[j + 1] - 1);
      grid.set(rows[i], c, Entity{Tile::DOOR_CLOSED, door_color()});
    }
  }
  return grid;
}

}  // namespace xmg
