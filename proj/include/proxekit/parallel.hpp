#pragma once

#include <cstddef>
#include <functional>

namespace proxekit {

// Worker count for data-parallel loops; respects the PROXEKIT_THREADS
// environment variable, clamped to [1, hardware_concurrency].
int worker_count();

// Runs fn(begin, end) over [0, count) in contiguous chunks, one per worker.
// Serial for small counts or a single worker. Chunks write disjoint output,
// so results do not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace proxekit
