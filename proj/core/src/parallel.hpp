#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rfeh::detail {

// Splits [0, n) into fixed-size chunks, runs `work(begin, end)` for each on
// up to `threads` workers, and returns the per-chunk results in chunk order.
// Chunk boundaries do not depend on the thread count.
template <class Result, class Work>
std::vector<Result> run_chunks(std::uint64_t n, std::uint64_t chunk, unsigned threads,
                               Work&& work) {
  const std::uint64_t chunks = (n + chunk - 1) / chunk;
  std::vector<Result> results(chunks);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      try {
        results[c] = work(c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = chunks;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace rfeh::detail
