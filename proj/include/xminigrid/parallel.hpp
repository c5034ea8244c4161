// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace xmg {

/// Calls fn(lo, hi) on `workers` contiguous slices of [0, n).
inline void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t, std::size_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
}

}  // namespace xmg
