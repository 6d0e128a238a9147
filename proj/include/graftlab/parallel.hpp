#pragma once

#include <cstddef>
#include <functional>

namespace graftlab {

/// Worker count from GRAFTLAB_THREADS, defaulting to the hardware concurrency.
std::size_t thread_count();

/// Runs task(i) for i in [0, count) on up to thread_count() workers. Tasks must write
/// only to their own slot; the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace graftlab
