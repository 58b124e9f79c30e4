#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hcim {

/// Runs body(worker, begin, end) over contiguous blocks of [0, count).
/// Blocks are assigned statically so the split depends only on `workers`.
template <typename Body>
void parallel_blocks(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  const std::size_t used = std::min<std::size_t>(workers, count);
  if (used <= 1) {
    body(0u, std::size_t{0}, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> threads;
    threads.reserve(used);
    for (std::size_t w = 0; w < used; ++w) {
      const std::size_t begin = count * w / used;
      const std::size_t end = count * (w + 1) / used;
      threads.emplace_back([&, w, begin, end] {
        try {
          body(static_cast<unsigned>(w), begin, end);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hcim
