#pragma once

#include <functional>

namespace pmbm {

/// Upper bound on worker threads for row-parallel kernels. 0 selects the
/// hardware concurrency. Results never depend on this value: each output row
/// is produced by exactly one worker with a fixed accumulation order.
void set_num_threads(int n);
int num_threads();

/// Calls fn(row) for every row in [0, rows), partitioned into contiguous
/// blocks across the configured worker count.
void parallel_for_rows(int rows, const std::function<void(int)>& fn);

}  // namespace pmbm
