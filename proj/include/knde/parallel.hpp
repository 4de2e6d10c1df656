#pragma once

#include "knde/types.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace knde {

//! Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
//! concurrency). Work items must write only to their own slot; the reduction
//! that follows is the caller's, in index order, so results never depend on
//! the schedule. The lowest-index exception is rethrown after the join.
inline void parallel_for(Index count, int threads,
                         const std::function<void(Index)>& fn) {
  if (count <= 0) return;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = hw > 0 ? hw : 1;
  threads = static_cast<int>(std::min<Index>(threads, count));

  if (threads <= 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<Index> next{0};
  auto worker = [&] {
    for (;;) {
      Index i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace knde
