#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace psgeo {

// Worker count for batch jobs: PSGEO_THREADS when set (clamped to [1, 256]),
// otherwise the hardware concurrency capped at 8.
inline int thread_budget() {
  if (const char* env = std::getenv("PSGEO_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed >= 1) {
      return static_cast<int>(std::min<long>(parsed, 256));
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

// Runs fn(block, begin, end) over [0, count) split into `workers` contiguous
// blocks.  Each block must write only its own outputs; any cross-block
// reduction belongs to the caller, who can then sum in block order so results
// do not depend on the thread count.  Exceptions are rethrown in block order.
inline void parallel_blocks(std::ptrdiff_t count, int workers,
                            const std::function<void(int, std::ptrdiff_t, std::ptrdiff_t)>& fn) {
  if (count <= 0) return;
  const int blocks = static_cast<int>(std::min<std::ptrdiff_t>(std::max(workers, 1), count));
  if (blocks == 1) {
    fn(0, 0, count);
    return;
  }
  const std::ptrdiff_t base = count / blocks;
  const std::ptrdiff_t extra = count % blocks;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(blocks));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(blocks));
  std::ptrdiff_t begin = 0;
  for (int b = 0; b < blocks; ++b) {
    const std::ptrdiff_t end = begin + base + (b < extra ? 1 : 0);
    pool.emplace_back([&, b, begin, end] {
      try {
        fn(b, begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(b)] = std::current_exception();
      }
    });
    begin = end;
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace psgeo
