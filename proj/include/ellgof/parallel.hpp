#pragma once

#include <cstddef>
#include <functional>

namespace ellgof {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Work is
/// assigned by index, so callers that write results[i] get output that is
/// independent of the worker count and of scheduling. Exceptions thrown by
/// fn are captured and the first one rethrown after all workers join.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

/// Worker count for "use all cores" requests; never returns 0.
unsigned default_workers();

}  // namespace ellgof
