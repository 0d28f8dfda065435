#pragma once

#include <cstddef>
#include <functional>

namespace timepref {

/// Job count from TIMEPREF_JOBS, or 1 when unset or unparsable.
int default_jobs();

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Each index runs exactly
/// once; callers write results into slot i so output order never depends on
/// scheduling. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace timepref
