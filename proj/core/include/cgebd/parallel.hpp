#pragma once

#include <cstddef>
#include <functional>

namespace cgebd {

// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Work items must be independent; outputs written by index so
// results do not depend on the worker count.
void parallel_for(size_t n, unsigned threads, const std::function<void(size_t)>& fn);

unsigned resolve_thread_count(unsigned requested);

}  // namespace cgebd
