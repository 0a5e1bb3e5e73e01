#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace trappair::detail {

//! Run fn(i) for i in [0, count) on up to n_threads workers.  Each index is
//! processed exactly once and results must be written to disjoint slots, so
//! the outcome is independent of scheduling.  The first exception (lowest
//! index) is rethrown.
template <typename Fn>
void parallel_for(int count, int n_threads, Fn&& fn) {
  n_threads = std::max(1, std::min(n_threads, count));
  if (n_threads <= 1) {
    for (int i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t)
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (std::thread& w : workers)
    w.join();
  for (int i = 0; i < count; ++i)
    if (errors[i])
      std::rethrow_exception(errors[i]);
}

} // namespace trappair::detail
