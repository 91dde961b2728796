#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace pklm {

// Thread count resolution: explicit request wins, then the PKLM_THREADS
// environment variable, then hardware concurrency.
unsigned resolve_threads(unsigned requested);

// Runs fn(0..count-1) across up to `threads` workers pulling from a shared
// counter. With threads <= 1 this is a plain loop. Tasks must write only
// to their own output slots; the first exception thrown is rethrown on the
// caller's thread after all workers finish.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (threads <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned n_workers = threads;
  if (static_cast<std::size_t>(n_workers) > count) n_workers = static_cast<unsigned>(count);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed.load()) std::rethrow_exception(error);
}

}  // namespace pklm
