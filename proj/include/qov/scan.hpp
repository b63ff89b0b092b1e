#pragma once

#include <atomic>
#include <cstdint>
#include <utility>

#include "qov/common.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace qov::scan {

enum class Step : uint8_t { Ok, Skip, Fail };

struct Result {
  bool failed = false;
  uint64_t index = 0;  // first failing instance when failed
  uint64_t skips = 0;  // skips over the whole range, or over [0, index) when failed
  uint64_t instances = 0;
};

// Reference implementation: walk the instance space in order, stop at the
// first failure. Skips are counted up to the stopping point.
template <class F>
Result run_serial(uint64_t n, F&& f) {
  Result r;
  r.instances = n;
  for (uint64_t i = 0; i < n; ++i) {
    Step s = f(i);
    if (s == Step::Skip) {
      ++r.skips;
    } else if (s == Step::Fail) {
      r.failed = true;
      r.index = i;
      return r;
    }
  }
  return r;
}

#if defined(_OPENMP)
namespace detail {
inline void atomic_min(std::atomic<uint64_t>& tgt, uint64_t v) {
  uint64_t cur = tgt.load(std::memory_order_relaxed);
  while (v < cur && !tgt.compare_exchange_weak(cur, v)) {
  }
}
}  // namespace detail
#endif

// OpenMP scan over the same instance space. The merged result is identical to
// the serial one: the witness is the minimum failing index, and on failure the
// skip count is re-derived over the prefix [0, index).
template <class F>
Result run_parallel(uint64_t n, F&& f) {
#if defined(_OPENMP)
  constexpr uint64_t kChunk = 8192;
  const int64_t nchunks = static_cast<int64_t>((n + kChunk - 1) / kChunk);
  std::atomic<uint64_t> best{n};
  uint64_t skips = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : skips)
  for (int64_t c = 0; c < nchunks; ++c) {
    const uint64_t lo = static_cast<uint64_t>(c) * kChunk;
    if (lo >= best.load(std::memory_order_relaxed)) continue;
    const uint64_t hi = lo + kChunk < n ? lo + kChunk : n;
    for (uint64_t i = lo; i < hi; ++i) {
      Step s = f(i);
      if (s == Step::Skip) {
        ++skips;
      } else if (s == Step::Fail) {
        detail::atomic_min(best, i);
        break;
      }
    }
  }

  Result r;
  r.instances = n;
  const uint64_t idx = best.load();
  if (idx == n) {
    r.skips = skips;
    return r;
  }
  r.failed = true;
  r.index = idx;
  // Recount skips deterministically over the prefix.
  uint64_t pre = 0;
#pragma omp parallel for schedule(static) reduction(+ : pre)
  for (int64_t i = 0; i < static_cast<int64_t>(idx); ++i) {
    if (f(static_cast<uint64_t>(i)) == Step::Skip) ++pre;
  }
  r.skips = pre;
  return r;
#else
  return run_serial(n, std::forward<F>(f));
#endif
}

template <class F>
Result run(uint64_t n, F&& f, Exec exec) {
  return exec == Exec::Parallel ? run_parallel(n, std::forward<F>(f))
                                : run_serial(n, std::forward<F>(f));
}

}  // namespace qov::scan
