#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace holopush {

// Worker cap: HOLOPUSH_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) over contiguous chunks. Each index is written by
// exactly one worker, so results do not depend on the thread count. If bodies
// throw, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace holopush
