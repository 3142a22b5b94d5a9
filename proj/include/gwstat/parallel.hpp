#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gwstat {

/// Worker count for replicate loops: GW_THREADS overrides, otherwise the
/// hardware count capped at 16.
inline unsigned worker_count() {
  if (const char* env = std::getenv("GW_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1u : std::min(hc, 16u);
}

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

/// Runs fn(i) for i in [0, n) over a small thread pool. Results must be
/// written to per-index slots; with that discipline the outcome is identical
/// for any thread count. Nested calls run serially.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = 0) {
  if (threads == 0) threads = worker_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n == 0 ? 1 : n));
  if (threads <= 1 || detail::inside_parallel_region) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      detail::inside_parallel_region = true;
      for (std::size_t i = lo; i < hi; ++i) fn(i);
      detail::inside_parallel_region = false;
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace gwstat
