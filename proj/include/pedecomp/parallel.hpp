#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace pedecomp {

// Splits [0, count) into at most `threads` contiguous chunks and runs
// fn(begin, end, chunk) on each. Small ranges run inline.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn,
                     std::size_t min_chunk = 4096) {
  std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, count / min_chunk));
  if (chunks <= 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(chunks - 1);
  const std::size_t per = (count + chunks - 1) / chunks;
  for (std::size_t c = 1; c < chunks; ++c) {
    std::size_t begin = c * per;
    std::size_t end = std::min(count, begin + per);
    workers.emplace_back([&fn, begin, end, c] { fn(begin, end, c); });
  }
  fn(std::size_t{0}, std::min(count, per), std::size_t{0});
}

}  // namespace pedecomp
