#pragma once

#include <functional>

namespace anyon {

/// Number of worker threads: ANYON_ENTROPY_THREADS if set to a positive
/// integer, otherwise the hardware concurrency (at least 1).
int worker_count();

/// Runs body(0) .. body(n-1) on up to worker_count() threads. Every index is
/// processed exactly once; if any call throws, the exception from the lowest
/// failing index is rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace anyon
