#pragma once
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace conic {

// Worker count override; 0 means "decide automatically". Set once by the CLI,
// read by every parallel loop.
inline std::atomic<int> g_thread_override{0};

inline void set_thread_count(int n) { g_thread_override.store(n < 0 ? 0 : n); }

inline int thread_count() {
  int n = g_thread_override.load();
  if (n > 0) return n;
  if (const char* env = std::getenv("CONIC_ZEROS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Splits [0, n) into a fixed number of contiguous chunks, maps each chunk to
// a partial result, and combines the partials in chunk order. The chunk
// layout does not depend on the worker count, so floating-point reductions
// give the same bits for any --threads value.
template <class R, class MapChunk, class Combine>
R parallel_map_reduce(long long n, R init, const MapChunk& map_chunk,
                      const Combine& combine) {
  if (n <= 0) return init;
  const int chunks = static_cast<int>(n < 64 ? n : 64);
  const long long step = (n + chunks - 1) / chunks;
  std::vector<R> partial(chunks, init);

  int workers = thread_count();
  if (workers > chunks) workers = chunks;
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto run = [&] {
    for (;;) {
      int c = next.fetch_add(1);
      if (c >= chunks || failed.load()) return;
      long long lo = c * step;
      long long hi = lo + step < n ? lo + step : n;
      try {
        partial[c] = map_chunk(lo, hi);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
  }
  if (failed.load()) std::rethrow_exception(failure);

  R acc = init;
  for (int c = 0; c < chunks; ++c) acc = combine(acc, partial[c]);
  return acc;
}

}  // namespace conic
