#pragma once

#include <cstddef>
#include <functional>

namespace kvnlab {

// Worker count: KVNLAB_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

// Overrides the environment for the current process; 0 restores the default.
void set_thread_count(std::size_t n);

// Runs fn(i) for i in [begin, end) split into contiguous chunks. Each index is
// visited exactly once, so fn may write to per-index output without locking.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& fn);

}  // namespace kvnlab
