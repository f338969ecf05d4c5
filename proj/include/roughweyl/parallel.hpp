#pragma once

#include <cstddef>
#include <functional>

namespace roughweyl {

// Worker cap: ROUGHWEYL_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned worker_limit();

// Runs body(i) for i in [0, n) on up to min(worker_limit(), n) threads.
// Results must be written to per-index slots, so the outcome does not
// depend on scheduling. The exception of the lowest failing index is
// rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace roughweyl
