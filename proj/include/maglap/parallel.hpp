#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace maglap {

/// Worker count after applying the MAGLAP_THREADS override; at least 1.
inline unsigned resolve_threads(unsigned requested) {
  if (const char *env = std::getenv("MAGLAP_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<unsigned>(v);
    } catch (const std::exception &) {
    }
  }
  return std::max(1u, requested);
}

/// Runs fn(0) .. fn(count-1) on up to `threads` workers. Tasks must write to
/// disjoint slots; the lowest-index exception is rethrown after all workers join.
template <class Fn> void parallel_for(std::size_t count, unsigned threads, Fn &&fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w)
    pool.emplace_back(worker);
  for (auto &t : pool)
    t.join();
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace maglap
