#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace netgame::detail {

// Splits [0, count) into contiguous chunks, one per worker. Each index is
// handled by exactly one call, so results do not depend on `threads`.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(threads > 1 ? threads : 1, count);
  if (workers <= 1 || count < 256) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(std::size_t{0}, std::min(count, chunk));
}

}  // namespace netgame::detail
