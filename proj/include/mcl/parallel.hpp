#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace mcl {

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
/// Callers must write results into per-index slots and reduce serially
/// afterwards; that keeps every aggregate identical to a 1-thread run.
inline void parallel_for(std::uint64_t count, std::uint32_t threads,
                         const std::function<void(std::uint64_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::uint32_t workers =
      static_cast<std::uint32_t>(std::min<std::uint64_t>(threads, count));
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint32_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

inline std::uint32_t default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

}  // namespace mcl
