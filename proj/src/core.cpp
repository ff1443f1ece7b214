#include "cma/core.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <thread>

namespace cma::par {

namespace {

int g_threads = -1;  // -1: not yet resolved

int resolve_threads() {
  if (const char* env = std::getenv("CMA_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int thread_count() {
  if (g_threads < 0) g_threads = resolve_threads();
  return g_threads;
}

void set_thread_count(int n) { g_threads = n > 0 ? n : resolve_threads(); }

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t nchunks = (count + kChunk - 1) / kChunk;
  const int nt = std::min<std::size_t>(thread_count(), nchunks);
  if (nt <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c)
      body(c * kChunk, std::min(count, (c + 1) * kChunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= nchunks) break;
      body(c * kChunk, std::min(count, (c + 1) * kChunk));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

namespace {

template <class Combine>
double reduce_chunks(std::size_t count,
                     const std::function<double(std::size_t, std::size_t)>& chunk_fn,
                     double init, Combine combine) {
  if (count == 0) return init;
  const std::size_t nchunks = (count + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks);
  parallel_for(count, [&](std::size_t lo, std::size_t hi) {
    partial[lo / kChunk] = chunk_fn(lo, hi);
  });
  double acc = init;
  for (std::size_t c = 0; c < nchunks; ++c) acc = combine(acc, partial[c]);
  return acc;
}

}  // namespace

double reduce_sum(std::size_t count, const std::function<double(std::size_t, std::size_t)>& f) {
  return reduce_chunks(count, f, 0.0, [](double a, double b) { return a + b; });
}

double reduce_max(std::size_t count, const std::function<double(std::size_t, std::size_t)>& f) {
  return reduce_chunks(count, f, -std::numeric_limits<double>::infinity(),
                       [](double a, double b) { return a > b ? a : b; });
}

double reduce_min(std::size_t count, const std::function<double(std::size_t, std::size_t)>& f) {
  return reduce_chunks(count, f, std::numeric_limits<double>::infinity(),
                       [](double a, double b) { return a < b ? a : b; });
}

}  // namespace cma::par
