#pragma once

#include <functional>

namespace nwig::detail {

// Number of worker threads: the NWIG_THREADS environment variable if set to
// a positive integer, otherwise std::thread::hardware_concurrency (at least 1).
int thread_count();

// Runs fn(row) for every row in [0, rows).  Rows are partitioned into
// contiguous blocks, one per worker.  Each row writes only its own outputs,
// so the result is bit-identical to a serial loop for any thread count --
// that determinism is the contract callers rely on, not just a convenience.
void parallel_for_rows(int rows, const std::function<void(int)>& fn);

}  // namespace nwig::detail
