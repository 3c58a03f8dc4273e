#include "cxtomo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cxtomo {

namespace {
std::atomic<int> g_workers{0};
}

void set_worker_threads(int count) { g_workers.store(count < 0 ? 0 : count); }

int worker_threads() {
  int w = g_workers.load();
  if (w > 0) return w;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_fn) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  const int workers = std::min<std::int64_t>(worker_threads(), count);
  if (workers <= 1) {
    chunk_fn(begin, end);
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto run_chunk = [&](int w) {
    const std::int64_t lo = begin + count * w / workers;
    const std::int64_t hi = begin + count * (w + 1) / workers;
    try {
      if (lo < hi) chunk_fn(lo, hi);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  for (int w = 1; w < workers; ++w) pool.emplace_back(run_chunk, w);
  run_chunk(0);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cxtomo
