#include "wildfire/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace wildfire {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
  int cap = g_max_threads.load();
  int hw = int(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  return cap > 0 ? std::min(cap, hw) : hw;
}

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  int workers = max_threads();
  if (workers <= 1 || count == 1) {
    for (std::int64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  if (std::int64_t(workers) > count) workers = int(count);

  std::atomic<std::int64_t> next{begin};
  // Dynamic chunks; fine because each index owns its output slot.
  const std::int64_t chunk = std::max<std::int64_t>(1, count / (workers * 8));
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t lo = next.fetch_add(chunk);
        if (lo >= end) break;
        const std::int64_t hi = std::min(end, lo + chunk);
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace wildfire
