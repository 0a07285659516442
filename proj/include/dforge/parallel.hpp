#pragma once

#include <cstddef>
#include <functional>

namespace dforge {

/// Worker count from DARBOUX_FORGE_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index must only touch its own
/// output slot; reductions are done by the caller afterwards.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace dforge
