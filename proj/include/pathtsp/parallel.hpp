#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace pathtsp {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to per-index slots; scheduling order is unspecified, so fn
/// must not depend on it.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (count == 0) return;
  int workers = std::max(1, threads);
  if (workers == 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int spawn = std::min<std::size_t>(workers, count);
  for (int w = 0; w < spawn; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

/// Default worker count for pipelines and batch runs.
int default_thread_count();

}  // namespace pathtsp
