// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "xminigrid/core.hpp"

namespace xmg {

/// view_size x view_size x 2 symbolic view: channel 0 tile ID, channel 1
/// color ID. The agent sits at the bottom-centre cell facing the top row.
struct Observation {
  int view_size = 0;
  std::vector<std::uint8_t> data;

  Observation() = default;
  explicit Observation(int v) : view_size(v), data(static_cast<std::size_t>(v) * v * 2, 0) {}

  Tile tile(int row, int col) const noexcept { return static_cast<Tile>(data[(row * view_size + col) * 2]); }
  Color color(int row, int col) const noexcept { return static_cast<Color>(data[(row * view_size + col) * 2 + 1]); }
  Entity at(int row, int col) const noexcept { return {tile(row, col), color(row, col)}; }

  friend bool operator==(const Observation&, const Observation&) = default;
};

namespace detail {

// Open-square test: does the segment between cell centres a and b pass
// through the interior of the unit cell centred at s? Exact integer math in
// half-cell units.
inline bool segment_crosses_cell(Position a, Position b, Position s) noexcept {
  struct Frac {
    long num, den;  // den > 0
  };
  auto less = [](Frac x, Frac y) { return x.num * y.den < y.num * x.den; };
  // Interval of t where |a + t*d - s| < 1 (doubled coordinates).
  auto axis = [](long a2, long d2, long s2, Frac& lo, Frac& hi) {
    if (d2 == 0) {
      const long diff = a2 - s2;
      if (diff <= -1 || diff >= 1) return false;
      lo = {-1, 1};
      hi = {2, 1};
      return true;
    }
    Frac t0{s2 - 1 - a2, d2}, t1{s2 + 1 - a2, d2};
    if (d2 < 0) {
      t0 = {-t0.num, -t0.den};
      t1 = {-t1.num, -t1.den};
      std::swap(t0, t1);
    }
    lo = t0;
    hi = t1;
    return true;
  };
  Frac lx, hx, ly, hy;
  if (!axis(2L * a.col, 2L * (b.col - a.col), 2L * s.col, lx, hx)) return false;
  if (!axis(2L * a.row, 2L * (b.row - a.row), 2L * s.row, ly, hy)) return false;
  const Frac lo = less(lx, ly) ? ly : lx;
  const Frac hi = less(hx, hy) ? hx : hy;
  return less(lo, hi) && less(lo, Frac{1, 1}) && less(Frac{0, 1}, hi);
}

}  // namespace detail

/// For each view cell, the set of view cells whose opacity hides it: those
/// whose interior the line of sight from the agent's cell centre touches.
class VisibilityTable {
 public:
  explicit VisibilityTable(int view_size) : view_size_(view_size), words_((view_size * view_size + 63) / 64) {
    const int n = view_size * view_size;
    masks_.assign(static_cast<std::size_t>(n) * words_, 0);
    const Position agent{view_size - 1, view_size / 2};
    for (int t = 0; t < n; ++t) {
      const Position target{t / view_size, t % view_size};
      for (int s = 0; s < n; ++s) {
        const Position cell{s / view_size, s % view_size};
        if (s == t || cell == agent) continue;
        if (detail::segment_crosses_cell(agent, target, cell)) {
          masks_[static_cast<std::size_t>(t) * words_ + s / 64] |= std::uint64_t{1} << (s % 64);
        }
      }
    }
  }

  int view_size() const noexcept { return view_size_; }
  int words() const noexcept { return words_; }

  std::span<const std::uint64_t> blockers(int cell) const noexcept {
    return {masks_.data() + static_cast<std::size_t>(cell) * words_, static_cast<std::size_t>(words_)};
  }

  /// Process-wide cached table; view sizes up to kMaxViewSize.
  static const VisibilityTable& get(int view_size) {
    static std::array<std::atomic<const VisibilityTable*>, kMaxViewSize + 1> cache{};
    static std::mutex mu;
    const auto idx = static_cast<std::size_t>(view_size);
    if (const auto* t = cache[idx].load(std::memory_order_acquire)) return *t;
    std::lock_guard lock(mu);
    if (const auto* t = cache[idx].load(std::memory_order_relaxed)) return *t;
    // Intentionally leaked: lives for the whole process.
    const auto* t = new VisibilityTable(view_size);
    cache[idx].store(t, std::memory_order_release);
    return *t;
  }

  static constexpr int kMaxViewSize = 31;

 private:
  int view_size_;
  int words_;
  std::vector<std::uint64_t> masks_;
};

/// Fills `out` with the agent's egocentric view. Cells off the map are
/// END_OF_MAP; with `see_through_walls` false, cells hidden behind WALL or
/// closed/locked doors are UNSEEN.
inline void observe_into(const Grid& grid, const AgentState& agent, int view_size, bool see_through_walls,
                         Observation& out) {
  const int v = view_size;
  const int n = v * v;
  if (out.view_size != v) out = Observation(v);
  const Position fwd = direction_offset(agent.direction);
  const Position right = direction_offset(turn_right(agent.direction));
  const int half = v / 2;

  std::array<std::uint64_t, (VisibilityTable::kMaxViewSize * VisibilityTable::kMaxViewSize + 63) / 64> opaque{};
  std::uint8_t* data = out.data.data();
  for (int i = 0; i < v; ++i) {
    const int ahead = v - 1 - i;
    for (int j = 0; j < v; ++j) {
      const int side = j - half;
      const Position p{agent.position.row + fwd.row * ahead + right.row * side,
                       agent.position.col + fwd.col * ahead + right.col * side};
      const int cell = i * v + j;
      // Branch-free: read a clamped cell, then mask it to END_OF_MAP (0).
      const bool inside = grid.in_bounds(p);
      const Position q{std::clamp(p.row, 0, grid.height() - 1), std::clamp(p.col, 0, grid.width() - 1)};
      const EntityCode code = static_cast<EntityCode>(grid.code(q) & -static_cast<int>(inside));
      opaque[cell / 64] |= std::uint64_t{is_opaque(static_cast<Tile>(code >> 4))} << (cell % 64);
      data[cell * 2] = static_cast<std::uint8_t>(code >> 4);
      data[cell * 2 + 1] = static_cast<std::uint8_t>(code & 0xF);
    }
  }
  if (see_through_walls) return;

  const auto& table = VisibilityTable::get(v);
  const int words = table.words();
  for (int cell = 0; cell < n; ++cell) {
    const auto blockers = table.blockers(cell);
    std::uint64_t hit = 0;
    for (int w = 0; w < words; ++w) hit |= blockers[w] & opaque[w];
    // Hidden cells become UNSEEN; END_OF_MAP cells stay as they are.
    const bool hidden = hit != 0 && data[cell * 2] != static_cast<std::uint8_t>(Tile::END_OF_MAP);
    const auto unseen = static_cast<std::uint8_t>(Tile::UNSEEN);
    data[cell * 2] = hidden ? unseen : data[cell * 2];
    data[cell * 2 + 1] = hidden ? static_cast<std::uint8_t>(Color::UNSEEN) : data[cell * 2 + 1];
  }
}

inline Observation observe(const Grid& grid, const AgentState& agent, int view_size, bool see_through_walls) {
  Observation out(view_size);
  observe_into(grid, agent, view_size, see_through_walls, out);
  return out;
}

}  // namespace xmg
