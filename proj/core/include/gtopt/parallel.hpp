#pragma once

#include <cstddef>
#include <functional>

namespace gtopt {

/// Runs fn(i) for i in [0, n) on up to `threads` workers with static block
/// partitioning. Each index is processed by exactly one worker, so results
/// written to disjoint slots are independent of the worker count.
/// threads <= 1 runs inline. fn also receives the worker id for per-worker
/// scratch state.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t index, int worker)>& fn);

}  // namespace gtopt
