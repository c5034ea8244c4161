// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace xmg {

/// Threefry-2x64 block cipher with 20 rounds (Random123 family). Pure
/// function of (counter, key); identical on every platform.
constexpr std::array<std::uint64_t, 2> threefry2x64(std::array<std::uint64_t, 2> ctr,
                                                    std::array<std::uint64_t, 2> key) noexcept {
  constexpr int kRot[8] = {16, 42, 12, 31, 16, 32, 24, 21};
  const std::uint64_t ks[3] = {key[0], key[1], 0x1BD11BDAA9FC1A22ull ^ key[0] ^ key[1]};
  std::uint64_t x0 = ctr[0] + ks[0];
  std::uint64_t x1 = ctr[1] + ks[1];
  for (int r = 0; r < 20; ++r) {
    x0 += x1;
    x1 = std::rotl(x1, kRot[r % 8]);
    x1 ^= x0;
    if (r % 4 == 3) {
      const int i = (r + 1) / 4;
      x0 += ks[i % 3];
      x1 += ks[(i + 1) % 3] + static_cast<std::uint64_t>(i);
    }
  }
  return {x0, x1};
}

/// Counter-based stream over a fixed key. Block j is threefry({j, 0}, key);
/// each block yields two 64-bit words. Satisfies UniformRandomBitGenerator,
/// but all helpers below avoid the implementation-defined std distributions.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr RandomStream(std::array<std::uint64_t, 2> key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    if (lane_ == 2) {
      block_ = threefry2x64({counter_++, 0}, key_);
      lane_ = 0;
    }
    return block_[lane_++];
  }

  /// Uniform integer in [0, n). n must be > 0.
  constexpr std::uint64_t uniform(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x >= threshold) return x % n;
    }
  }

  /// Uniform integer in [lo, hi] inclusive.
  constexpr std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    return lo + static_cast<std::int64_t>(uniform(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  constexpr bool bernoulli(double p) noexcept { return uniform01() < p; }

  /// Fisher-Yates shuffle.
  template <class T>
  constexpr void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  template <class T>
  constexpr void shuffle(std::vector<T>& items) noexcept {
    shuffle(std::span<T>(items));
  }

  template <class T>
  constexpr const T& choice(std::span<const T> items) noexcept {
    return items[static_cast<std::size_t>(uniform(items.size()))];
  }

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> block_{};
  int lane_ = 2;
};

/// 128-bit splittable key. Children, fold-ins and streams are all derived by
/// encrypting distinct counters under the parent key, so a child depends only
/// on (parent, index) and never on how many siblings were requested.
class Rng {
 public:
  constexpr Rng() noexcept = default;
  constexpr explicit Rng(std::array<std::uint64_t, 2> key) noexcept : key_(key) {}

  static constexpr Rng from_seed(std::uint64_t seed) noexcept { return Rng({0, seed}); }

  constexpr const std::array<std::uint64_t, 2>& key() const noexcept { return key_; }

  constexpr Rng child(std::uint64_t index) const noexcept {
    return Rng(threefry2x64({index, kSplitDomain}, key_));
  }

  std::vector<Rng> split(std::size_t n) const {
    std::vector<Rng> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(child(i));
    return out;
  }

  template <std::size_t N>
  constexpr std::array<Rng, N> split() const noexcept {
    std::array<Rng, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = child(i);
    return out;
  }

  constexpr Rng fold_in(std::uint64_t data) const noexcept {
    return Rng(threefry2x64({data, kFoldDomain}, key_));
  }

  constexpr RandomStream stream() const noexcept { return RandomStream(key_); }

  friend constexpr bool operator==(const Rng&, const Rng&) = default;

 private:
  static constexpr std::uint64_t kSplitDomain = 0x8000000000000001ull;
  static constexpr std::uint64_t kFoldDomain = 0x8000000000000002ull;

  std::array<std::uint64_t, 2> key_{};
};

}  // namespace xmg
