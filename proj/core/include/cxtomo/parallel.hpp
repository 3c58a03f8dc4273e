#pragma once

#include <cstdint>
#include <functional>

namespace cxtomo {

/// Process-wide worker count. 0 restores the hardware default.
void set_worker_threads(int count);
int worker_threads();

/// Splits [begin, end) into one contiguous chunk per worker and runs
/// chunk_fn(chunk_begin, chunk_end) on each. Every index is handled by exactly
/// one worker, so results are identical for any thread count as long as
/// chunk_fn writes only to locations derived from its own indices.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_fn);

}  // namespace cxtomo
