#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace relatent {

// Runs body(i) for i in [0, n) on up to hardware_concurrency threads using a
// static interleaved schedule. The first exception thrown by any worker is
// rethrown on the calling thread after all workers finish.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, bool parallel = true) {
  std::size_t workers = parallel ? std::max<std::size_t>(1, std::thread::hardware_concurrency()) : 1;
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace relatent
