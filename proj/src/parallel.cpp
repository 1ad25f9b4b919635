#include "anyon/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace anyon {
namespace {

// Nested parallel_for calls run inline on the calling worker.
thread_local bool inside_worker = false;

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("ANYON_ENTROPY_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& body) {
  if (n <= 0) return;
  const int threads = inside_worker ? 1 : std::min(worker_count(), n);
  std::atomic<int> next{0};
  std::mutex mutex;
  int failed_index = n;
  std::exception_ptr failure;

  const auto work = [&] {
    for (int idx = next++; idx < n; idx = next++) {
      try {
        body(idx);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (idx < failed_index) {
          failed_index = idx;
          failure = std::current_exception();
        }
      }
    }
  };

  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&work] {
        inside_worker = true;
        work();
      });
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace anyon
