#pragma once

#include <cstddef>
#include <functional>

namespace rgw {

// Thread count: an explicit positive request wins, then RGW_THREADS, then
// hardware_concurrency (at least 1).
std::size_t resolve_threads(std::size_t requested = 0);

// Runs fn(0..n-1) over `threads` workers with static striping. The first
// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace rgw
