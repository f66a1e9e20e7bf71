#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace shapegram::detail {

inline int thread_count() {
  if (const char* env = std::getenv("SHAPEGRAM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(chunk_index, begin, end) over disjoint chunks of [0, n).
// Chunk boundaries depend only on n and grain, never on the worker
// count, so per-chunk results can be reduced in chunk order to get
// output that is identical no matter how many threads run.
template <class Fn>
void parallel_chunks(long long n, long long grain, Fn&& fn) {
  if (n <= 0) return;
  grain = std::max<long long>(1, grain);
  const long long chunks = (n + grain - 1) / grain;
  const int workers = static_cast<int>(std::min<long long>(thread_count(), chunks));
  if (workers <= 1) {
    for (long long c = 0; c < chunks; ++c) fn(c, c * grain, std::min(n, (c + 1) * grain));
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (;;) {
          const long long c = next.fetch_add(1, std::memory_order_relaxed);
          if (c >= chunks) return;
          fn(c, c * grain, std::min(n, (c + 1) * grain));
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Compensated (Kahan) accumulator for long deterministic sums.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace shapegram::detail
