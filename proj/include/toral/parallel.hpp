#pragma once

#include <cstddef>
#include <functional>

namespace toral {

// Worker count: TORAL_NODAL_THREADS if set and positive, otherwise the
// hardware concurrency (at least 1).
unsigned worker_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once; bodies
// must only write to per-index storage so results do not depend on the
// schedule. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace toral
