#include "hoplr/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace hoplr {

namespace {
std::atomic<int> g_threads{1};
constexpr std::size_t kLeaf = 32;
}  // namespace

void set_thread_count(int threads) { g_threads.store(std::max(1, threads)); }

int thread_count() { return g_threads.load(); }

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace hoplr
