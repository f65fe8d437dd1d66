#pragma once

#include <algorithm>
#include <thread>
#include <vector>

#include "stoprule/model.hpp"

namespace stoprule::mc::detail {

inline unsigned worker_count(unsigned requested, Index work) {
  unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<Index>(t, std::max<Index>(1, work)));
}

// Runs body(begin, end, slot) over t contiguous chunks of [0, total).
template <class Body>
void parallel_chunks(Index total, unsigned t, Body&& body) {
  if (t <= 1) {
    body(Index{0}, total, 0u);
    return;
  }
  std::vector<std::thread> pool;
  const Index chunk = (total + t - 1) / t;
  for (unsigned w = 0; w < t; ++w) {
    const Index begin = std::min<Index>(total, chunk * w);
    const Index end = std::min<Index>(total, begin + chunk);
    pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace stoprule::mc::detail
