#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace talbot {

/// Worker count for the batch evaluators. 0 selects hardware concurrency.
struct Exec {
  unsigned threads = 1;

  unsigned resolved() const {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

/// Runs body(i) for i in [0, count). Work items must write disjoint outputs;
/// results are then independent of the worker count. The first exception
/// thrown by any item is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t count, const Exec& exec, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(exec.resolved(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace talbot
