#pragma once

#include <cstddef>
#include <functional>

namespace xcf {

/// Worker cap: XCFLAB_THREADS if set to a positive integer, else hardware concurrency.
int worker_count();

/// Runs body(n) for n in [0, count). Work is split into contiguous chunks, so
/// results written per index are independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace xcf
