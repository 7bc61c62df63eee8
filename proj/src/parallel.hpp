#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace dform::detail {

// Splits [0, n) into `threads` contiguous blocks and runs fn(begin, end, block)
// on each. Block boundaries depend only on n and the block count.
template <typename Fn>
void parallel_blocks(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t blocks =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (blocks == 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = n * b / blocks;
    const std::size_t end = n * (b + 1) / blocks;
    pool.emplace_back([&fn, begin, end, b] { fn(begin, end, b); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace dform::detail
