#pragma once

#include <cstddef>
#include <functional>

namespace eccar {

/// Thread cap: min(hardware_concurrency, ECCAR_THREADS if set). Always >= 1.
std::size_t thread_budget();

/// Runs fn(0..count-1) across up to thread_budget() threads. Each index runs
/// exactly once; callers own any ordering of the results (write into
/// preallocated slots for deterministic reductions).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace eccar
