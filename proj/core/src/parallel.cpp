#include "asepkpz/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace asepkpz {

int default_thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  n = std::min(n, 8);
  if (const char* env = std::getenv("ASEP_KPZ_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) n = cap;
    } catch (const std::exception&) {
      // Malformed value: ignore and keep the default.
    }
  }
  return n;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn, int threads) {
  if (n <= 0) return;
  if (threads <= 0) threads = default_thread_count();
  threads = static_cast<int>(std::min<std::int64_t>(threads, n));
  if (threads == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = n * t / threads;
    const std::int64_t hi = n * (t + 1) / threads;
    pool.emplace_back([&, lo, hi]() {
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace asepkpz
