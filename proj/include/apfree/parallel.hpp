#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace apfree {

/// APFREE_THREADS when set to a positive integer, else hardware concurrency.
inline unsigned default_threads() {
  if (const char* env = std::getenv("APFREE_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, count) into `threads` contiguous chunks and runs
/// fn(worker, begin, end) on each. Chunks are disjoint, so fn may write to
/// per-worker slots without locking.
template <typename Fn>
void parallel_chunks(unsigned threads, std::size_t count, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    fn(0u, std::size_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = count * w / threads;
      const std::size_t end = count * (w + 1) / threads;
      workers.emplace_back([&fn, &errors, w, begin, end] {
        try {
          fn(w, begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace apfree
