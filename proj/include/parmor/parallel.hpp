// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_PARALLEL_HPP
#define PARMOR_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "parmor/types.hpp"

namespace parmor {

// Run body(0..n-1) on up to `threads` workers (the calling thread included).
// Results must be written to per-index slots by the caller; combined with an
// index-ordered reduction afterwards this keeps outputs bit-identical for
// every thread count. The first exception thrown by any body is rethrown.
inline void parallel_indexed(Index n, int threads,
                             const std::function<void(Index)> &body)
{
  const int workers =
      static_cast<int>(std::min<Index>(std::max(threads, 1), std::max<Index>(n, 1)));
  if (workers <= 1)
  {
    for (Index i = 0; i < n; i++)
    {
      body(i);
    }
    return;
  }
  std::atomic<Index> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto drain = [&]() {
    while (!failed.load(std::memory_order_relaxed))
    {
      const Index i = next.fetch_add(1);
      if (i >= n)
      {
        break;
      }
      try
      {
        body(i);
      }
      catch (...)
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error)
        {
          error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers) - 1);
  for (int t = 0; t + 1 < workers; t++)
  {
    pool.emplace_back(drain);
  }
  drain();
  for (std::thread &t : pool)
  {
    t.join();
  }
  if (error)
  {
    std::rethrow_exception(error);
  }
}

} // namespace parmor

#endif // PARMOR_PARALLEL_HPP
