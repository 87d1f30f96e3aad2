#pragma once

#include <cstddef>
#include <functional>

namespace speclab {

// Worker count: SPECLAB_JOBS if set and positive, else the hardware concurrency.
unsigned job_count();

// Calls body(i) for i in [0, n) on up to job_count() threads. Each index is visited once;
// the first exception thrown is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace speclab
