#pragma once

#include <functional>

namespace seglab {

/// Worker count: SEG_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs body(k) for k in [0, n) split into contiguous blocks across workers.
/// Bodies must write to disjoint outputs; results never depend on the split.
void parallel_for(int n, const std::function<void(int)>& body);

} // namespace seglab
