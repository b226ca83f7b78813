#pragma once

#include <cstddef>
#include <functional>

namespace plab {

/// Cap on worker threads used by parallel_for; 0 restores the default
/// (hardware concurrency).
void set_thread_limit(int n);
int thread_limit();

/// Run f(0..n-1), spreading indices over up to thread_limit() threads.
/// Calls made from inside a worker run serially. The first exception thrown
/// by any f is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

} // namespace plab
