#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace maskprune {

// Number of worker threads used by parallel_for. 0 picks the hardware count.
// Results never depend on this value: work items write to disjoint outputs.
void set_thread_count(int count);
int thread_count();

// Runs func(i) for i in [0, count). Blocks until all items are done.
// The split into contiguous chunks is fixed, so any per-chunk state is
// reproducible across runs regardless of scheduling.
template <typename Func>
void parallel_for(size_t count, Func&& func) {
  size_t workers = static_cast<size_t>(thread_count());
  if (workers <= 1 || count <= 1) {
    for (size_t i = 0; i < count; i++) func(i);
    return;
  }
  workers = std::min(workers, count);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t w = 0; w < workers; w++) {
    size_t begin = count * w / workers;
    size_t end = count * (w + 1) / workers;
    threads.emplace_back([begin, end, &func]() {
      for (size_t i = begin; i < end; i++) func(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace maskprune
