#pragma once

#include <cstddef>
#include <functional>

namespace psig {

/// Worker count: SIG_THREADS if set and positive, otherwise hardware concurrency.
[[nodiscard]] std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
/// handled exactly once; callers write results by index so the outcome does not
/// depend on scheduling. The first exception thrown by a task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace psig
