#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace amlmc {

/// Process-wide default worker count for sample-parallel loops.
/// Thread count affects wall clock only; results are keyed by sample index
/// and aggregated in index order, so they do not depend on it.
void set_worker_count(unsigned n);
unsigned worker_count();

/// Runs fn(i) for i in [0, n) across workers with a static block split.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace amlmc
