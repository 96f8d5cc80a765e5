#pragma once

#include <cstddef>
#include <functional>

namespace fusionkit {

/// Worker count for parallel relation generation: FUSIONKIT_THREADS when
/// set (clamped to at least 1), otherwise 1.
int worker_count();

/// Runs fn(i) for i in [0, n) on the configured workers. Callers collect
/// results into pre-sized slots so the outcome is independent of the
/// thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fusionkit
