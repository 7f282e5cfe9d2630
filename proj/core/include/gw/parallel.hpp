#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gw {

// Worker count for embarrassingly parallel loops; capped by the
// GROUPOID_THREADS environment variable (default: all cores).
inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("GROUPOID_THREADS")) {
    const long cap = std::atol(env);
    if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
  }
  return n;
}

// Runs fn(i) for i in [0, n). Results must be written to disjoint slots so
// the outcome is independent of scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::thread> threads;
  threads.reserve(used);
  for (unsigned w = 0; w < used; ++w) {
    threads.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += used) fn(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace gw
