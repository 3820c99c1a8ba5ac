#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace meanbounds::detail {

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 selects the
/// hardware concurrency). Tasks must write only to their own output slots;
/// callers reduce sequentially afterwards so results stay deterministic.
/// The first exception thrown by any task is rethrown after all workers join.
template <class F>
void parallel_for(std::size_t count, int threads, F&& fn) {
  unsigned want = threads > 0 ? static_cast<unsigned>(threads)
                              : std::thread::hardware_concurrency();
  if (want == 0) want = 1;
  if (want > count) want = static_cast<unsigned>(count);
  if (want <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(want);
  for (unsigned t = 0; t < want; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace meanbounds::detail
