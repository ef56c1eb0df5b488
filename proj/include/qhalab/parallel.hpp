#pragma once

// Worker-count knob and a chunked parallel_for. Results must be written by
// index; the merge order is deterministic regardless of the worker count.

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace qhalab {

inline int& worker_override() {
  static int value = 0;  // 0 = not set
  return value;
}

inline void set_worker_count(int w) { worker_override() = w; }

inline int worker_count() {
  if (worker_override() > 0) return worker_override();
  if (const char* env = std::getenv("QHA_LAB_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

template <class Fn>
void parallel_for(long begin, long end, const Fn& fn) {
  long count = end - begin;
  if (count <= 0) return;
  int workers = worker_count();
  if (workers <= 1 || count == 1) {
    for (long i = begin; i < end; ++i) fn(i);
    return;
  }
  if (workers > count) workers = static_cast<int>(count);
  std::atomic<long> next(begin);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        long i = next.fetch_add(1);
        if (i >= end) break;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qhalab
