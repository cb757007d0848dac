#pragma once

// Deterministic sample-parallel execution. Work items are indexed; every
// item derives its own random substream and writes to its own output slot,
// so results are byte-identical for any thread count. The env variable
// ASEP_KPZ_THREADS caps the worker count (default: hardware concurrency,
// at most 8).

#include <cstdint>
#include <functional>

namespace asepkpz {

int default_thread_count();

// Runs fn(i) for i in [0, n). fn must only touch state owned by item i.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn,
                  int threads = 0);

}  // namespace asepkpz
