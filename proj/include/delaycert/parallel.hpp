#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace delaycert::detail {

/// Worker cap: hardware concurrency, overridable (usually downward) with the
/// RA_THREADS environment variable. Cached after first read.
[[nodiscard]] inline unsigned thread_budget() {
  static const unsigned cached = [] {
    unsigned budget = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RA_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v >= 1 && v <= 4096)
        budget = static_cast<unsigned>(v);
    }
    return budget;
  }();
  return cached;
}

/// Runs fn(k) for k = 1..n across the thread budget. Results must be written
/// to preallocated per-k slots by fn itself; this wrapper only schedules.
/// Exceptions are captured per index and the one with the smallest k is
/// rethrown after all workers join, so failure behavior is deterministic.
template <class Fn>
inline void parallel_for_1n(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(thread_budget(), n);
  std::vector<std::exception_ptr> errors(n + 1);

  if (workers <= 1) {
    for (std::size_t k = 1; k <= n; ++k) {
      try {
        fn(k);
      } catch (...) {
        errors[k] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{1};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k > n) return;
          try {
            fn(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t k = 1; k <= n; ++k)
    if (errors[k]) std::rethrow_exception(errors[k]);
}

}  // namespace delaycert::detail
