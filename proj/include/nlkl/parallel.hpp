#pragma once

#include <cstddef>
#include <functional>

namespace nlkl {

/// Number of worker threads used by parallel_for; NLKL_THREADS overrides the
/// hardware default.
std::size_t worker_count();

/// Runs fn(i) for every i in [0, count) on a small worker pool. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace nlkl
