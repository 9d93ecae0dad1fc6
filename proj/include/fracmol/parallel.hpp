// Copyright 2026 The fracmol Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fracmol {

/// Worker count: FRACMOL_THREADS when set to an integer in [1, 256],
/// hardware concurrency otherwise.
inline unsigned thread_count() {
  if (const char* env = std::getenv("FRACMOL_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1 && n <= 256) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * Calls body(i) for i in [0, count) on up to thread_count() threads. Each
 * index is handled exactly once; callers write results into per-index slots
 * and reduce afterwards in index order, which keeps output independent of
 * scheduling. The first exception thrown by any body is rethrown.
 */
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fracmol
