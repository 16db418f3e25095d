#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace geodisc {

/// Worker count: hardware concurrency, capped by GEODISC_THREADS when set.
inline unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GEODISC_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
    }
  }
  return n;
}

/// Runs body(chunk, begin, end) over a fixed partition of [0, n) into
/// `chunks` pieces. The partition depends only on n and chunks, so per-chunk
/// partial results combined in chunk order are deterministic regardless of
/// the number of threads.
template <class Body>
void parallel_chunks(size_t n, size_t chunks, Body&& body) {
  chunks = std::max<size_t>(1, std::min(chunks, std::max<size_t>(n, 1)));
  const unsigned workers = std::min<unsigned>(thread_count(), static_cast<unsigned>(chunks));
  auto range = [&](size_t c) {
    return std::pair<size_t, size_t>{n * c / chunks, n * (c + 1) / chunks};
  };
  if (workers <= 1) {
    for (size_t c = 0; c < chunks; ++c) {
      auto [b, e] = range(c);
      body(c, b, e);
    }
    return;
  }
  std::mutex mu;
  std::exception_ptr error;
  size_t next = 0;
  auto worker = [&] {
    for (;;) {
      size_t c;
      {
        std::lock_guard lock(mu);
        if (next >= chunks || error) return;
        c = next++;
      }
      try {
        auto [b, e] = range(c);
        body(c, b, e);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace geodisc
