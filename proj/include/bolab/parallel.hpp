#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace bolab {

/// BOLAB_WORKERS if set, otherwise the hardware concurrency (at least 1).
inline unsigned default_workers() {
  if (const char* env = std::getenv("BOLAB_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(i, worker) for i in [0, n) over contiguous blocks, one block per worker.
/// The first exception thrown by any worker is rethrown after all have joined.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i, 0u);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i, w);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Pairwise (tree) sum in index order; the result depends only on the input sequence.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t h = x.size() / 2;
  return pairwise_sum(x.first(h)) + pairwise_sum(x.subspan(h));
}

}  // namespace bolab
