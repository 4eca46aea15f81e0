#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace lsub {

/// Worker count: LSUB_THREADS when set to a positive integer, else the
/// hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("LSUB_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls f(i) for i in [0, count) on contiguous blocks. Results must be
/// written to per-index slots. Blocks are ordered, so the first failing
/// block rethrows the error of the lowest failing index.
template <class F>
void parallel_for(std::size_t count, F&& f) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t begin = count * w / workers, end = count * (w + 1) / workers;
      for (std::size_t i = begin; i < end; ++i) {
        try {
          f(i);
        } catch (...) {
          errors[w] = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (std::size_t w = 0; w < workers; ++w)
    if (errors[w]) std::rethrow_exception(errors[w]);
}

}  // namespace lsub
