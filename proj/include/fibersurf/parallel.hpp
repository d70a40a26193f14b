#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace fibersurf {

/// Upper bound on worker threads for internal parallel maps (0 = hardware).
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs body(begin, end) over fixed-size chunks of [0, n). Chunk boundaries do
/// not depend on the thread count, so per-chunk results can be merged in a
/// deterministic order.
void parallel_chunks(std::size_t n, std::size_t chunk, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace fibersurf
