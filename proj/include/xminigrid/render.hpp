// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <zlib.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "xminigrid/env.hpp"
#include "xminigrid/errors.hpp"
#include "xminigrid/observation.hpp"

namespace xmg {

using Rgb = std::array<std::uint8_t, 3>;

/// Row-major RGB8 image.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, Rgb fill = {0, 0, 0}) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < pixels.size(); i += 3) std::memcpy(&pixels[i], fill.data(), 3);
  }

  Rgb at(int x, int y) const noexcept {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    std::memcpy(&pixels[(static_cast<std::size_t>(y) * width + x) * 3], c.data(), 3);
  }

  friend bool operator==(const Image&, const Image&) = default;
};

inline constexpr int kImageObservationSize = 224;

/// Display color of each color ID.
constexpr Rgb palette(Color c) noexcept {
  switch (c) {
    case Color::END_OF_MAP: return {6, 6, 18};
    case Color::UNSEEN: return {24, 24, 24};
    case Color::EMPTY: return {0, 0, 0};
    case Color::RED: return {230, 25, 25};
    case Color::GREEN: return {30, 200, 60};
    case Color::BLUE: return {35, 80, 230};
    case Color::PURPLE: return {130, 50, 200};
    case Color::YELLOW: return {240, 220, 30};
    case Color::GREY: return {120, 120, 120};
    case Color::BLACK: return {0, 0, 0};
    case Color::ORANGE: return {250, 140, 20};
    case Color::WHITE: return {250, 250, 250};
    case Color::BROWN: return {120, 70, 25};
    case Color::PINK: return {250, 120, 190};
  }
  return {0, 0, 0};
}

namespace detail {

inline constexpr Rgb kGridLine{56, 56, 56};
inline constexpr Rgb kOutline{175, 175, 175};
inline constexpr Rgb kAgent{255, 40, 40};

// Contrasting tone of c: darker for bright colors, lighter for dark ones.
constexpr Rgb accent(Rgb c) noexcept {
  const int luma = (c[0] * 3 + c[1] * 6 + c[2]) / 10;
  Rgb out{};
  for (int k = 0; k < 3; ++k) out[k] = static_cast<std::uint8_t>(luma > 90 ? c[k] * 5 / 9 : c[k] / 2 + 100);
  return out;
}

constexpr Rgb scaled(Rgb c, int num, int den) noexcept {
  return {static_cast<std::uint8_t>(c[0] * num / den), static_cast<std::uint8_t>(c[1] * num / den),
          static_cast<std::uint8_t>(c[2] * num / den)};
}

struct Pt {
  double x, y;
};

inline bool in_polygon(const std::vector<Pt>& poly, double x, double y) noexcept {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if ((poly[i].y > y) != (poly[j].y > y) &&
        x < (poly[j].x - poly[i].x) * (y - poly[i].y) / (poly[j].y - poly[i].y) + poly[i].x)
      inside = !inside;
  }
  return inside;
}

inline std::vector<Pt> regular_polygon(int sides, double radius, double phase, double inner = 0.0) {
  std::vector<Pt> pts;
  const int n = inner > 0 ? sides * 2 : sides;
  for (int i = 0; i < n; ++i) {
    const double r = (inner > 0 && i % 2 == 1) ? inner : radius;
    const double a = phase + 2.0 * M_PI * i / n;
    pts.push_back({0.5 + r * std::cos(a), 0.5 + r * std::sin(a)});
  }
  return pts;
}

// Membership of a unit-square point in the shape of an object tile.
inline bool in_shape(Tile t, double x, double y) {
  static const auto pyramid = std::vector<Pt>{{0.5, 0.16}, {0.16, 0.82}, {0.84, 0.82}};
  static const auto hex = regular_polygon(6, 0.38, 0.0);
  static const auto star = regular_polygon(5, 0.46, -M_PI / 2, 0.19);
  const double dx = x - 0.5, dy = y - 0.5;
  switch (t) {
    case Tile::BALL: return dx * dx + dy * dy < 0.27 * 0.27;
    case Tile::SQUARE: return std::abs(dx) < 0.36 && std::abs(dy) < 0.36;
    case Tile::PYRAMID: return in_polygon(pyramid, x, y);
    case Tile::HEX: return in_polygon(hex, x, y);
    case Tile::STAR: return in_polygon(star, x, y);
    case Tile::KEY: {
      const double rx = x - 0.5, ry = y - 0.3, rr = rx * rx + ry * ry;
      const bool ring = rr < 0.2 * 0.2 && rr > 0.07 * 0.07;
      const bool shaft = std::abs(x - 0.5) < 0.09 && y > 0.45 && y < 0.88;
      const bool tooth = x > 0.5 && x < 0.74 && ((y > 0.6 && y < 0.7) || (y > 0.76 && y < 0.86));
      return ring || shaft || tooth;
    }
    default: return false;
  }
}

inline void fill(Image& img, Rgb c) {
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) img.set(x, y, c);
}

inline void grid_lines(Image& img) {
  for (int i = 0; i < img.width; ++i) img.set(i, 0, kGridLine);
  for (int i = 0; i < img.height; ++i) img.set(0, i, kGridLine);
}

// Axis-aligned rectangle in unit coordinates.
inline void rect(Image& img, double x0, double y0, double x1, double y1, Rgb c) {
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const double u = (x + 0.5) / img.width, v = (y + 0.5) / img.height;
      if (u >= x0 && u < x1 && v >= y0 && v < y1) img.set(x, y, c);
    }
}

inline void frame(Image& img, int inset, int thickness, Rgb c) {
  const int n = img.width;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const int d = std::min(std::min(x, y), std::min(n - 1 - x, n - 1 - y));
      if (d >= inset && d < inset + thickness) img.set(x, y, c);
    }
}

inline Image floor_sprite(Rgb base, int px) {
  Image img(px, px, base);
  grid_lines(img);
  return img;
}

}  // namespace detail

/// Pixel art of one cell, `tile_px` pixels square. END_OF_MAP, UNSEEN and
/// EMPTY ignore the color channel. Sprites of distinct renderable entities
/// differ from 7 pixels up.
inline Image render_sprite(Entity e, int tile_px) {
  using namespace detail;
  if (tile_px < 4) throw InvalidConfig("tile_px must be at least 4, got " + std::to_string(tile_px));
  const Rgb c = palette(e.color);
  const int line = std::max(1, tile_px / 16);
  switch (e.tile) {
    case Tile::END_OF_MAP: return Image(tile_px, tile_px, palette(Color::END_OF_MAP));
    case Tile::UNSEEN: return Image(tile_px, tile_px, palette(Color::UNSEEN));
    case Tile::EMPTY: return Image(tile_px, tile_px, palette(Color::EMPTY));
    case Tile::FLOOR: return floor_sprite(scaled(c, 1, 3), tile_px);
    case Tile::WALL: {
      Image img(tile_px, tile_px, c);
      const Rgb mortar = accent(c);
      // Three brick courses, joints staggered by half a tile.
      for (int y = 0; y < tile_px; ++y)
        for (int x = 0; x < tile_px; ++x) {
          const int course = y * 3 / tile_px;
          const bool bed = y - course * tile_px / 3 < line;
          const int joint = course % 2 == 1 ? tile_px / 2 : 0;
          if (bed || (x >= joint && x < joint + line)) img.set(x, y, mortar);
        }
      return img;
    }
    case Tile::GOAL: {
      Image img(tile_px, tile_px, c);
      grid_lines(img);
      const Rgb mark = accent(c);
      for (int y = 0; y < tile_px; ++y)
        for (int x = 0; x < tile_px; ++x) {
          const double u = (x + 0.5) / tile_px - 0.5, v = (y + 0.5) / tile_px - 0.5;
          if (std::abs(u) + std::abs(v) < 0.2) img.set(x, y, mark);
        }
      return img;
    }
    case Tile::DOOR_LOCKED: {
      Image img(tile_px, tile_px, c);
      frame(img, 0, line, accent(c));
      rect(img, 0.38, 0.3, 0.62, 0.7, accent(c));
      return img;
    }
    case Tile::DOOR_CLOSED: {
      Image img(tile_px, tile_px, c);
      frame(img, std::max(1, tile_px / 8), line, accent(c));
      rect(img, 0.62, 0.4, 0.84, 0.6, accent(c));
      return img;
    }
    case Tile::DOOR_OPEN: {
      Image img = floor_sprite(palette(Color::BLACK), tile_px);
      frame(img, 0, line, accent(c));
      frame(img, line, std::max(1, tile_px / 8), c);
      return img;
    }
    default: break;
  }
  // Object on black floor; dark shapes get a light outline.
  const bool dark = c[0] < 40 && c[1] < 40 && c[2] < 40;
  Image img = floor_sprite(palette(Color::BLACK), tile_px);
  std::vector<char> mask(static_cast<std::size_t>(tile_px) * tile_px);
  for (int y = 0; y < tile_px; ++y)
    for (int x = 0; x < tile_px; ++x)
      mask[y * tile_px + x] = in_shape(e.tile, (x + 0.5) / tile_px, (y + 0.5) / tile_px);
  auto inside = [&](int x, int y) { return x >= 0 && y >= 0 && x < tile_px && y < tile_px && mask[y * tile_px + x]; };
  for (int y = 0; y < tile_px; ++y)
    for (int x = 0; x < tile_px; ++x) {
      if (!inside(x, y)) continue;
      const bool edge = !inside(x - 1, y) || !inside(x + 1, y) || !inside(x, y - 1) || !inside(x, y + 1);
      img.set(x, y, edge && dark ? kOutline : c);
    }
  return img;
}

/// Entities an observation can contain, each with its own sprite.
inline std::vector<Entity> renderable_entities() {
  std::vector<Entity> out = {kEndOfMap, kUnseen, kEmpty};
  for (int t = static_cast<int>(Tile::FLOOR); t < kNumTiles; ++t)
    for (int c = static_cast<int>(Color::RED); c < kNumColors; ++c)
      out.push_back({static_cast<Tile>(t), static_cast<Color>(c)});
  return out;
}

/// Pre-rendered sprites for one tile size, keyed by entity code.
class SpriteCache {
 public:
  explicit SpriteCache(int tile_px) : tile_px_(tile_px) {
    for (Entity e : renderable_entities()) sprites_.emplace(pack_entity(e), render_sprite(e, tile_px));
  }

  int tile_px() const noexcept { return tile_px_; }
  const std::map<EntityCode, Image>& sprites() const noexcept { return sprites_; }

  /// Sprite of e. Special tiles ignore the color; a regular tile carrying a
  /// special color is drawn as BLACK.
  const Image& get(Entity e) const {
    if (e.tile == Tile::END_OF_MAP) e = kEndOfMap;
    if (e.tile == Tile::UNSEEN) e = kUnseen;
    if (e.tile == Tile::EMPTY) e = kEmpty;
    if (e.tile >= Tile::FLOOR && e.color < Color::RED) e.color = Color::BLACK;
    return sprites_.at(pack_entity(e));
  }

  /// "XMGS", u16 tile_px, u16 count, then per sprite u8 code and raw RGB.
  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    auto u16 = [&](unsigned v) {
      const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
      f.write(b, 2);
    };
    f.write("XMGS", 4);
    u16(static_cast<unsigned>(tile_px_));
    u16(static_cast<unsigned>(sprites_.size()));
    for (const auto& [code, img] : sprites_) {
      f.put(static_cast<char>(code));
      f.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    }
    if (!f) throw IoError("failed writing " + path);
  }

  static SpriteCache load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (bytes.size() < 8 || std::memcmp(bytes.data(), "XMGS", 4) != 0) throw FormatError(path + ": not a sprite cache");
    const int px = bytes[4] | (bytes[5] << 8);
    const std::size_t count = bytes[6] | (bytes[7] << 8);
    const std::size_t each = 1 + static_cast<std::size_t>(px) * px * 3;
    if (px < 4 || bytes.size() != 8 + count * each) throw FormatError(path + ": inconsistent sprite cache size");
    SpriteCache cache;
    cache.tile_px_ = px;
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint8_t* p = bytes.data() + 8 + i * each;
      Image img(px, px);
      std::memcpy(img.pixels.data(), p + 1, img.pixels.size());
      cache.sprites_.emplace(p[0], std::move(img));
    }
    return cache;
  }

  friend bool operator==(const SpriteCache& a, const SpriteCache& b) {
    return a.tile_px_ == b.tile_px_ && a.sprites_ == b.sprites_;
  }

 private:
  SpriteCache() = default;

  int tile_px_ = 0;
  std::map<EntityCode, Image> sprites_;
};

/// Process-wide cache per tile size, built on first use.
inline const SpriteCache& sprite_cache(int tile_px) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<SpriteCache>> caches;
  std::lock_guard lock(mutex);
  auto& slot = caches[tile_px];
  if (!slot) slot = std::make_unique<SpriteCache>(tile_px);
  return *slot;
}

namespace detail {

inline void blit(Image& dst, const Image& src, int x0, int y0) {
  for (int y = 0; y < src.height; ++y)
    std::memcpy(&dst.pixels[(static_cast<std::size_t>(y0 + y) * dst.width + x0) * 3],
                &src.pixels[static_cast<std::size_t>(y) * src.width * 3], static_cast<std::size_t>(src.width) * 3);
}

inline void draw_agent(Image& img, int x0, int y0, int px, Direction d) {
  // Triangle pointing up, rotated to the facing direction, white rim.
  const std::vector<Pt> tri = {{0.5, 0.1}, {0.16, 0.88}, {0.84, 0.88}};
  auto inside = [&](int x, int y) {
    double u = (x + 0.5) / px, v = (y + 0.5) / px;
    for (int k = 0; k < static_cast<int>(d); ++k) {
      const double nu = v, nv = 1.0 - u;  // inverse of a quarter turn clockwise
      u = nu;
      v = nv;
    }
    return in_polygon(tri, u, v);
  };
  for (int y = 0; y < px; ++y)
    for (int x = 0; x < px; ++x) {
      if (!inside(x, y)) continue;
      const bool rim = !inside(x - 1, y) || !inside(x + 1, y) || !inside(x, y - 1) || !inside(x, y + 1);
      img.set(x0 + x, y0 + y, rim && px >= 8 ? Rgb{255, 255, 255} : kAgent);
    }
}

}  // namespace detail

/// Full state with the agent drawn as a triangle.
inline Image render_rgb(const EnvState& s, int tile_px) {
  const SpriteCache& cache = sprite_cache(tile_px);
  Image img(s.grid.width() * tile_px, s.grid.height() * tile_px);
  for (int r = 0; r < s.grid.height(); ++r)
    for (int c = 0; c < s.grid.width(); ++c) detail::blit(img, cache.get(s.grid.at(r, c)), c * tile_px, r * tile_px);
  const Position p = s.agent.position;
  if (s.grid.in_bounds(p)) detail::draw_agent(img, p.col * tile_px, p.row * tile_px, tile_px, s.agent.direction);
  return img;
}

/// Symbolic observation, one sprite per cell.
inline Image render_rgb(const Observation& obs, int tile_px) {
  const SpriteCache& cache = sprite_cache(tile_px);
  Image img(obs.view_size * tile_px, obs.view_size * tile_px);
  for (int r = 0; r < obs.view_size; ++r)
    for (int c = 0; c < obs.view_size; ++c) detail::blit(img, cache.get(obs.at(r, c)), c * tile_px, r * tile_px);
  return img;
}

/// Placement of view cells inside the square image observation.
struct ImageLayout {
  int tile_px = 0;
  int offset = 0;  // padding before the first cell on each axis
};

inline ImageLayout image_layout(int view_size) {
  if (view_size < 1 || kImageObservationSize / view_size < 7)
    throw InvalidConfig("view_size " + std::to_string(view_size) + " leaves fewer than 7 pixels per cell");
  const int px = kImageObservationSize / view_size;
  return {px, (kImageObservationSize - px * view_size) / 2};
}

/// 224 x 224 RGB rendering of an observation; leftover border is UNSEEN.
inline Image image_observation(const Observation& obs) {
  const ImageLayout L = image_layout(obs.view_size);
  const SpriteCache& cache = sprite_cache(L.tile_px);
  Image img(kImageObservationSize, kImageObservationSize, palette(Color::UNSEEN));
  for (int r = 0; r < obs.view_size; ++r)
    for (int c = 0; c < obs.view_size; ++c)
      detail::blit(img, cache.get(obs.at(r, c)), L.offset + c * L.tile_px, L.offset + r * L.tile_px);
  return img;
}

/// Inverse of image_observation by nearest sprite (sum of squared errors).
inline Observation decode_image_observation(const Image& img, int view_size) {
  if (img.width != kImageObservationSize || img.height != kImageObservationSize)
    throw InvalidConfig("image observation must be 224x224");
  const ImageLayout L = image_layout(view_size);
  const SpriteCache& cache = sprite_cache(L.tile_px);
  Observation obs(view_size);
  for (int r = 0; r < view_size; ++r)
    for (int c = 0; c < view_size; ++c) {
      long best = -1;
      EntityCode best_code = 0;
      for (const auto& [code, sprite] : cache.sprites()) {
        long err = 0;
        for (int y = 0; y < L.tile_px; ++y)
          for (int x = 0; x < L.tile_px; ++x) {
            const Rgb a = img.at(L.offset + c * L.tile_px + x, L.offset + r * L.tile_px + y), b = sprite.at(x, y);
            for (int k = 0; k < 3; ++k) err += (a[k] - b[k]) * (a[k] - b[k]);
          }
        if (best < 0 || err < best) {
          best = err;
          best_code = code;
        }
      }
      obs.data[(r * view_size + c) * 2] = static_cast<std::uint8_t>(best_code >> 4);
      obs.data[(r * view_size + c) * 2 + 1] = static_cast<std::uint8_t>(best_code & 0xF);
    }
  return obs;
}

/// Glyph of a tile in ASCII renders.
constexpr char tile_glyph(Tile t) noexcept {
  constexpr char glyphs[kNumTiles] = {'~', '?', ' ', '.', '#', 'o', 's', 'p', 'G', 'k', 'L', 'D', '/', 'h', '*'};
  const auto i = static_cast<std::size_t>(t);
  return i < kNumTiles ? glyphs[i] : '!';
}

constexpr char direction_glyph(Direction d) noexcept {
  constexpr char glyphs[4] = {'^', '>', 'v', '<'};
  return glyphs[static_cast<int>(d) & 3];
}

/// One character per cell, then a legend listing every non-floor entity.
inline std::string render_ascii(const EnvState& s) {
  std::ostringstream out;
  std::map<EntityCode, std::vector<Position>> seen;
  for (int r = 0; r < s.grid.height(); ++r) {
    for (int c = 0; c < s.grid.width(); ++c) {
      const Entity e = s.grid.at(r, c);
      if (Position{r, c} == s.agent.position) {
        out << direction_glyph(s.agent.direction);
      } else {
        out << tile_glyph(e.tile);
      }
      if (e.tile != Tile::FLOOR && e.tile != Tile::WALL) seen[pack_entity(e)].push_back({r, c});
    }
    out << '\n';
  }
  out << "legend:\n";
  out << "  " << direction_glyph(s.agent.direction) << " agent at (" << s.agent.position.row << ","
      << s.agent.position.col << ") holding ";
  if (s.agent.holding()) {
    out << color_name(s.agent.pocket.color) << ' ' << tile_name(s.agent.pocket.tile) << '\n';
  } else {
    out << "nothing\n";
  }
  for (const auto& [code, cells] : seen) {
    const Entity e = unpack_entity(code);
    out << "  " << tile_glyph(e.tile) << ' ' << color_name(e.color) << ' ' << tile_name(e.tile) << " at";
    for (auto p : cells) out << " (" << p.row << "," << p.col << ")";
    out << '\n';
  }
  return out.str();
}

namespace detail {

inline void put_be32(std::string& s, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void png_chunk(std::string& out, const char* type, const std::string& data) {
  put_be32(out, static_cast<std::uint32_t>(data.size()));
  const std::string body = std::string(type, 4) + data;
  out += body;
  put_be32(out, static_cast<std::uint32_t>(
                    crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()))));
}

}  // namespace detail

/// PPM (P6) bytes of an image.
inline std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  return out;
}

/// PNG bytes: 8-bit RGB, filter 0 on every row.
inline std::string encode_png(const Image& img) {
  std::string raw;
  raw.reserve(static_cast<std::size_t>(img.height) * (img.width * 3 + 1));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back('\0');
    raw.append(reinterpret_cast<const char*>(&img.pixels[static_cast<std::size_t>(y) * img.width * 3]),
               static_cast<std::size_t>(img.width) * 3);
  }
  uLongf size = compressBound(static_cast<uLong>(raw.size()));
  std::string z(size, '\0');
  if (compress2(reinterpret_cast<Bytef*>(z.data()), &size, reinterpret_cast<const Bytef*>(raw.data()),
                static_cast<uLong>(raw.size()), 9) != Z_OK)
    throw IoError("zlib failed compressing PNG data");
  z.resize(size);
  std::string ihdr;
  detail::put_be32(ihdr, static_cast<std::uint32_t>(img.width));
  detail::put_be32(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr += std::string("\x08\x02\x00\x00\x00", 5);
  std::string out("\x89PNG\r\n\x1a\n", 8);
  detail::png_chunk(out, "IHDR", ihdr);
  detail::png_chunk(out, "IDAT", z);
  detail::png_chunk(out, "IEND", "");
  return out;
}

/// Writes PNG when the path ends in ".png", PPM otherwise.
inline void write_image(const std::string& path, const Image& img) {
  const bool png = path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0;
  const std::string bytes = png ? encode_png(img) : encode_ppm(img);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

/// Reads a binary PPM written by write_image.
inline Image read_ppm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  f >> magic >> w >> h >> maxval;
  if (!f || magic != "P6" || maxval != 255 || w <= 0 || h <= 0) throw FormatError(path + ": not an 8-bit P6 PPM");
  f.get();
  Image img(w, h);
  f.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (f.gcount() != static_cast<std::streamsize>(img.pixels.size())) throw FormatError(path + ": truncated pixels");
  return img;
}

}  // namespace xmg
