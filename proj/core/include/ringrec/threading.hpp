#pragma once

#include <cstdint>
#include <functional>

namespace ringrec {

// Global worker count. 0 or 1 means serial. The partitioning of parallel_for
// is independent of this value, so numeric results never depend on it.
void set_thread_count(int n);
int thread_count();
int hardware_threads();

// Runs fn(begin, end) over fixed-size chunks of [0, n). Chunks are disjoint
// and the chunk boundaries depend only on (n, grain), never on the thread
// count; callers must write disjoint outputs per index.
void parallel_for(int64_t n, int64_t grain, const std::function<void(int64_t, int64_t)>& fn);

}  // namespace ringrec
