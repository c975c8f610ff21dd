#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace claimrep {

// Static block partition over [0, n). Each index is processed exactly once
// and writes only to its own output slot, so results are identical for any
// worker count. threads == 0 means hardware concurrency.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    const std::size_t begin = n * t / workers;
    const std::size_t end = n * (t + 1) / workers;
    pool.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace claimrep
