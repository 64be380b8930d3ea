#pragma once

#include <cstddef>
#include <functional>

namespace germforge {

// Worker cap: GERMFORGE_THREADS if set and positive, else hardware threads.
std::size_t thread_count();

// Calls f(i) for i in [0, n); work is split across up to thread_count()
// threads. Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace germforge
