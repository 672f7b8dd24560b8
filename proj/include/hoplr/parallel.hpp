#pragma once

// Deterministic data parallelism. Work is split into contiguous index ranges;
// callers write disjoint outputs, and reductions go through pairwise_sum,
// whose tree does not depend on the thread count.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace hoplr {

/// Worker count used by parallel_for; values < 1 are clamped to 1.
void set_thread_count(int threads);
int thread_count();

/// Calls body(begin, end) over a partition of [0, n).
template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_chunk = 4096) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count()), (n + min_chunk - 1) / min_chunk);
  if (workers <= 1) {
    if (n > 0) body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * step;
    const std::size_t end = std::min(n, begin + step);
    pool.emplace_back([&, w, begin, end] {
      try {
        if (begin < end) body(begin, end);
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

/// Pairwise (tree) summation with a fixed block size.
double pairwise_sum(std::span<const double> values);

}  // namespace hoplr
