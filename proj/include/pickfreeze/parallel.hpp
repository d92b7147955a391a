#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace pickfreeze {

// Static contiguous partition of [0, n) into at most `threads` chunks. Results
// must not depend on the partition, which holds whenever chunk [lo, hi) only
// writes slots [lo, hi) of its outputs and draws randomness from per-index
// substreams.
template <typename Fn>
void parallel_chunks(std::int64_t n, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2) {
    if (n > 0) fn(std::int64_t(0), n);
    return;
  }
  const int t = int(std::min<std::int64_t>(threads, n));
  const std::int64_t chunk = (n + t - 1) / t;
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (int w = 0; w < t; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
  parallel_chunks(n, threads, [&fn](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) fn(i);
  });
}

}  // namespace pickfreeze
