#pragma once

#include <cstddef>
#include <functional>

namespace kcn {

/// Worker count: `KCN_THREADS` when set to a positive integer, otherwise the
/// number of hardware threads (at least 1).
std::size_t thread_count();

/// Runs `body(i)` for every i in [0, n) on up to `threads` workers. Blocks
/// until all calls return; the first exception thrown is rethrown.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace kcn
