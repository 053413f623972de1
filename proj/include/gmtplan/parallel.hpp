#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace gmt {

// Static contiguous partition of [0, count) into at most `workers` chunks, one
// thread each.  Callers must write only to per-index slots; because the chunk
// boundaries never influence what fn computes for an index, results are identical
// for any worker count.
template <typename Fn>
void parallel_chunks(int workers, std::size_t count, Fn&& fn) {
  if (count == 0) return;
  std::size_t nchunks = std::min<std::size_t>(std::max(workers, 1), count);
  if (nchunks <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nchunks - 1);
  std::size_t base = count / nchunks;
  std::size_t extra = count % nchunks;
  std::size_t begin = 0;
  for (std::size_t c = 0; c < nchunks; ++c) {
    std::size_t len = base + (c < extra ? 1 : 0);
    std::size_t end = begin + len;
    if (c + 1 == nchunks) {
      fn(begin, end);
    } else {
      pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace gmt
