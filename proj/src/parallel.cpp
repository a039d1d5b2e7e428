#include "maskprune/parallel.hpp"

#include <atomic>

namespace maskprune {

namespace {
std::atomic<int> g_thread_count{0};
}

void set_thread_count(int count) { g_thread_count.store(count < 0 ? 0 : count); }

int thread_count() {
  int n = g_thread_count.load();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace maskprune
