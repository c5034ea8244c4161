// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <zlib.h>

#include <array>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "xminigrid/benchgen.hpp"
#include "xminigrid/errors.hpp"
#include "xminigrid/rng.hpp"
#include "xminigrid/rules.hpp"

namespace xmg {

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr char kFormatMagic[4] = {'X', 'M', 'G', 'B'};
inline constexpr std::uint16_t kFlagDeflate = 1;

/// An immutable list of equally padded rulesets, stored as a row-major
/// byte matrix: per task 4 goal bytes, 4 * max_rules rule bytes and
/// max_objects object bytes.
class Benchmark {
 public:
  Benchmark() = default;
  Benchmark(std::size_t max_rules, std::size_t max_objects) : max_rules_(max_rules), max_objects_(max_objects) {}

  static Benchmark from_rulesets(const std::vector<Ruleset>& rulesets, std::size_t max_rules, std::size_t max_objects) {
    Benchmark b(max_rules, max_objects);
    b.rows_.reserve(rulesets.size() * b.row_size());
    for (const auto& rs : rulesets) b.push_back(rs);
    return b;
  }

  static Benchmark from_rulesets(const std::vector<Ruleset>& rulesets, const BenchmarkConfig& cfg) {
    Benchmark b = from_rulesets(rulesets, cfg.max_rules(), cfg.max_objects());
    b.name = cfg.name;
    b.seed = cfg.random_seed;
    return b;
  }

  std::string name = "custom";
  std::uint64_t seed = 0;
  std::uint16_t version = kFormatVersion;

  std::size_t max_rules() const noexcept { return max_rules_; }
  std::size_t max_objects() const noexcept { return max_objects_; }
  std::size_t row_size() const noexcept { return 4 + 4 * max_rules_ + max_objects_; }
  std::size_t num_rulesets() const noexcept { return row_size() == 0 ? 0 : rows_.size() / row_size(); }
  const std::vector<std::uint8_t>& bytes() const noexcept { return rows_; }

  void push_back(Ruleset rs) {
    rs.pad_to(max_rules_, max_objects_);
    rows_.insert(rows_.end(), rs.goal.begin(), rs.goal.end());
    for (const auto& r : rs.rules) rows_.insert(rows_.end(), r.begin(), r.end());
    rows_.insert(rows_.end(), rs.init_objects.begin(), rs.init_objects.end());
  }

  Ruleset get_ruleset(std::size_t id) const {
    if (id >= num_rulesets())
      throw IndexOutOfRange("ruleset " + std::to_string(id) + " out of " + std::to_string(num_rulesets()));
    const std::uint8_t* p = rows_.data() + id * row_size();
    Ruleset rs;
    std::copy_n(p, 4, rs.goal.begin());
    p += 4;
    rs.rules.resize(max_rules_);
    for (auto& r : rs.rules) {
      std::copy_n(p, 4, r.begin());
      p += 4;
    }
    rs.init_objects.assign(p, p + max_objects_);
    return rs;
  }

  Ruleset sample_ruleset(Rng key) const {
    if (num_rulesets() == 0) throw IndexOutOfRange("cannot sample from an empty benchmark");
    auto s = key.stream();
    return get_ruleset(static_cast<std::size_t>(s.uniform(num_rulesets())));
  }

  Benchmark shuffle(Rng key) const {
    std::vector<std::size_t> order(num_rulesets());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto s = key.stream();
    s.shuffle(order);
    return select(order);
  }

  /// First floor(prop * n) tasks and the rest.
  std::pair<Benchmark, Benchmark> split(double prop) const {
    if (!(prop > 0.0 && prop < 1.0)) throw InvalidProportion("split proportion must be in (0, 1)");
    const auto cut = static_cast<std::size_t>(prop * static_cast<double>(num_rulesets()));
    Benchmark a = empty_like(), b = empty_like();
    a.rows_.assign(rows_.begin(), rows_.begin() + static_cast<std::ptrdiff_t>(cut * row_size()));
    b.rows_.assign(rows_.begin() + static_cast<std::ptrdiff_t>(cut * row_size()), rows_.end());
    return {std::move(a), std::move(b)};
  }

  Benchmark select(const std::vector<std::size_t>& ids) const {
    Benchmark out = empty_like();
    out.rows_.reserve(ids.size() * row_size());
    for (auto id : ids) {
      if (id >= num_rulesets()) throw IndexOutOfRange("ruleset " + std::to_string(id));
      const auto* p = rows_.data() + id * row_size();
      out.rows_.insert(out.rows_.end(), p, p + row_size());
    }
    return out;
  }

  void set_bytes(std::vector<std::uint8_t> rows) {
    if (row_size() == 0 || rows.size() % row_size() != 0) throw FormatError("body is not a whole number of rows");
    rows_ = std::move(rows);
  }

  friend bool operator==(const Benchmark&, const Benchmark&) = default;

 private:
  Benchmark empty_like() const {
    Benchmark b(max_rules_, max_objects_);
    b.name = name;
    b.seed = seed;
    b.version = version;
    return b;
  }

  std::size_t max_rules_ = kDefaultMaxRules;
  std::size_t max_objects_ = 0;
  std::vector<std::uint8_t> rows_;
};

namespace detail {

class ByteWriter {
 public:
  template <class T>
  void put(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
  }
  void put_bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf.insert(buf.end(), b, b + n);
  }
  std::vector<std::uint8_t> buf;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* p, std::size_t n) : p_(p), end_(p + n) {}
  template <class T>
  T get() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p_[i]) << (8 * i);
    p_ += sizeof(T);
    return static_cast<T>(v);
  }
  const std::uint8_t* take(std::size_t n) {
    need(n);
    const auto* out = p_;
    p_ += n;
    return out;
  }
  std::size_t remaining() const noexcept { return static_cast<std::size_t>(end_ - p_); }

 private:
  void need(std::size_t n) const {
    if (static_cast<std::size_t>(end_ - p_) < n) throw FormatError("file is truncated");
  }
  const std::uint8_t* p_;
  const std::uint8_t* end_;
};

inline std::uint32_t crc32_of(const std::vector<std::uint8_t>& v) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  std::size_t off = 0;
  while (off < v.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(v.size() - off, 1u << 30));
    crc = ::crc32(crc, v.data() + off, n);
    off += n;
  }
  return static_cast<std::uint32_t>(crc);
}

inline std::vector<std::uint8_t> deflate_bytes(const std::vector<std::uint8_t>& raw) {
  uLongf size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> out(size);
  if (compress2(out.data(), &size, raw.data(), static_cast<uLong>(raw.size()), Z_BEST_COMPRESSION) != Z_OK)
    throw IoError("deflate failed");
  out.resize(size);
  return out;
}

inline std::vector<std::uint8_t> inflate_bytes(const std::uint8_t* data, std::size_t n, std::size_t raw_size) {
  std::vector<std::uint8_t> out(raw_size);
  uLongf size = static_cast<uLongf>(raw_size);
  if (uncompress(out.data(), &size, data, static_cast<uLong>(n)) != Z_OK || size != raw_size)
    throw FormatError("compressed body is corrupt");
  return out;
}

}  // namespace detail

/// Serializes to the on-disk layout documented in docs/format.md.
inline std::vector<std::uint8_t> serialize_benchmark(const Benchmark& b, bool compress) {
  const auto& raw = b.bytes();
  const std::vector<std::uint8_t> body = compress ? detail::deflate_bytes(raw) : raw;
  detail::ByteWriter w;
  w.put_bytes(kFormatMagic, 4);
  w.put<std::uint16_t>(b.version);
  w.put<std::uint16_t>(compress ? kFlagDeflate : 0);
  w.put<std::uint64_t>(b.num_rulesets());
  w.put<std::uint16_t>(static_cast<std::uint16_t>(b.max_rules()));
  w.put<std::uint16_t>(static_cast<std::uint16_t>(b.max_objects()));
  w.put<std::uint64_t>(b.seed);
  w.put<std::uint16_t>(static_cast<std::uint16_t>(b.name.size()));
  w.put_bytes(b.name.data(), b.name.size());
  w.put<std::uint64_t>(raw.size());
  w.put<std::uint64_t>(body.size());
  w.put<std::uint32_t>(detail::crc32_of(raw));
  w.put_bytes(body.data(), body.size());
  return std::move(w.buf);
}

inline Benchmark deserialize_benchmark(const std::vector<std::uint8_t>& file) {
  detail::ByteReader r(file.data(), file.size());
  if (std::memcmp(r.take(4), kFormatMagic, 4) != 0) throw FormatError("bad magic, not a benchmark file");
  const auto version = r.get<std::uint16_t>();
  if (version != kFormatVersion)
    throw FormatError("unsupported format version " + std::to_string(version) + " (expected " +
                      std::to_string(kFormatVersion) + ")");
  const auto flags = r.get<std::uint16_t>();
  if (flags & ~kFlagDeflate) throw FormatError("unknown flags " + std::to_string(flags));
  const auto count = r.get<std::uint64_t>();
  const auto max_rules = r.get<std::uint16_t>();
  const auto max_objects = r.get<std::uint16_t>();
  Benchmark b(max_rules, max_objects);
  b.seed = r.get<std::uint64_t>();
  const auto name_len = r.get<std::uint16_t>();
  const auto* name = r.take(name_len);
  b.name.assign(reinterpret_cast<const char*>(name), name_len);
  const auto raw_size = r.get<std::uint64_t>();
  const auto stored_size = r.get<std::uint64_t>();
  const auto crc = r.get<std::uint32_t>();
  if (raw_size != count * b.row_size()) throw FormatError("header sizes are inconsistent");
  if (r.remaining() != stored_size) throw FormatError("body length does not match header");
  const auto* body = r.take(stored_size);
  std::vector<std::uint8_t> raw = (flags & kFlagDeflate) ? detail::inflate_bytes(body, stored_size, raw_size)
                                                         : std::vector<std::uint8_t>(body, body + stored_size);
  if (detail::crc32_of(raw) != crc) throw FormatError("checksum mismatch");
  b.set_bytes(std::move(raw));
  return b;
}

inline void save_benchmark(const std::filesystem::path& path, const Benchmark& b, bool compress = true) {
  const auto bytes = serialize_benchmark(b, compress);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

inline Benchmark load_benchmark(const std::filesystem::path& path) { return deserialize_benchmark(read_file(path)); }

/// Named benchmarks and the config plus size each is generated from.
struct NamedBenchmark {
  std::string name;
  std::string config;
  std::size_t num_rulesets;
};

inline const std::vector<NamedBenchmark>& registered_benchmarks() {
  static const std::vector<NamedBenchmark> names = {
      {"trivial-1m", "trivial", 1'000'000}, {"small-1m", "small", 1'000'000},   {"medium-1m", "medium", 1'000'000},
      {"medium-3m", "medium", 3'000'000},   {"high-1m", "high", 1'000'000},     {"high-3m", "high", 3'000'000},
  };
  return names;
}

/// $XMINIGRID_DATA, else $XLAND_MINIGRID_DATA, else ~/.xland_minigrid.
inline std::filesystem::path data_directory() {
  if (const char* d = std::getenv("XMINIGRID_DATA"); d && *d) return d;
  if (const char* d = std::getenv("XLAND_MINIGRID_DATA"); d && *d) return d;
  const char* home = std::getenv("HOME");
  return std::filesystem::path(home ? home : ".") / ".xland_minigrid";
}

inline std::filesystem::path named_benchmark_path(const std::string& name) {
  return data_directory() / (name + ".xmgb");
}

namespace detail {
struct BenchmarkCache {
  std::mutex mu;
  std::map<std::pair<std::string, std::uint16_t>, std::shared_ptr<const Benchmark>> entries;
  std::size_t disk_loads = 0;
};
inline BenchmarkCache& benchmark_cache() {
  static BenchmarkCache c;
  return c;
}
}  // namespace detail

/// Loads a registered benchmark from the data directory; later calls with
/// the same name share the cached copy.
inline std::shared_ptr<const Benchmark> load_named(const std::string& name) {
  const auto& reg = registered_benchmarks();
  if (std::none_of(reg.begin(), reg.end(), [&](const auto& e) { return e.name == name; })) {
    std::string known;
    for (const auto& e : reg) known += (known.empty() ? "" : ", ") + e.name;
    throw UnknownBenchmark("'" + name + "' is not registered; known: " + known);
  }
  auto& cache = detail::benchmark_cache();
  std::lock_guard lock(cache.mu);
  if (auto it = cache.entries.find({name, kFormatVersion}); it != cache.entries.end()) return it->second;
  const auto path = named_benchmark_path(name);
  if (!std::filesystem::exists(path))
    throw IoError("'" + path.string() + "' not found; create it with `xmg generate --name " + name + "`");
  auto b = std::make_shared<const Benchmark>(load_benchmark(path));
  ++cache.disk_loads;
  std::erase_if(cache.entries, [&](const auto& kv) { return kv.first.first == name; });
  cache.entries[{name, b->version}] = b;
  return b;
}

inline std::size_t named_cache_disk_loads() {
  auto& cache = detail::benchmark_cache();
  std::lock_guard lock(cache.mu);
  return cache.disk_loads;
}

inline void clear_named_cache() {
  auto& cache = detail::benchmark_cache();
  std::lock_guard lock(cache.mu);
  cache.entries.clear();
}

}  // namespace xmg
