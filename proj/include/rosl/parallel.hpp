#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rosl {

/// Thread cap from ROSL_SOLVE_THREADS (0 or unset = hardware concurrency).
inline int solve_thread_count() {
  if (const char* env = std::getenv("ROSL_SOLVE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(i) for i in [0, n). Work items must be independent; results must
/// not depend on execution order.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  const int threads = std::min(solve_thread_count(), n);
  // thread spawn costs dominate below ~10k cheap work items
  if (threads <= 1 || n < 8192) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace rosl
