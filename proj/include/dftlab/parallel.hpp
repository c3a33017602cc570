#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace dftlab {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Runs fn(i) for every i in [0, total). Results must land in index-keyed
// slots (or be merged by integer counts), so the worker count can only
// change timing, never output.
template <typename Fn>
void parallel_for(std::uint64_t total, unsigned threads, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), total ? total : 1));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = total * w / workers;
    const std::uint64_t hi = total * (w + 1) / workers;
    pool.emplace_back([&fn, &errors, lo, hi, w] {
      try {
        for (std::uint64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Number of i in [0, total) with pred(i) true; per-worker counts are summed
// in worker order (integer addition, schedule independent).
template <typename Pred>
std::uint64_t parallel_count(std::uint64_t total, unsigned threads, Pred&& pred) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), total ? total : 1));
  if (workers <= 1) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < total; ++i)
      if (pred(i)) ++hits;
    return hits;
  }
  std::vector<std::uint64_t> counts(workers, 0);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = total * w / workers;
    const std::uint64_t hi = total * (w + 1) / workers;
    pool.emplace_back([&pred, &counts, &errors, lo, hi, w] {
      try {
        std::uint64_t local = 0;
        for (std::uint64_t i = lo; i < hi; ++i)
          if (pred(i)) ++local;
        counts[w] = local;
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::uint64_t hits = 0;
  for (auto c : counts) hits += c;
  return hits;
}

}  // namespace dftlab
