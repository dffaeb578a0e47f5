#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace wfa {

// Runs fn(i) for i in [0, count). Work items must be independent and write
// only to their own preallocated slots, so results never depend on the job
// count or on scheduling.
inline void parallel_for(std::int64_t count, int jobs,
                         const std::function<void(std::int64_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(std::min<std::int64_t>(jobs, count));
  std::atomic<std::int64_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&]() {
    for (;;) {
      const std::int64_t i = cursor.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wfa
