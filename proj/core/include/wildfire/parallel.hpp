#pragma once

#include <cstdint>

#include <functional>

namespace wildfire {

/// Caps the worker count used by parallel_for. 0 restores the default
/// (hardware concurrency). Results never depend on the cap.
void set_max_threads(int n);

int max_threads();

/// Runs fn(i) for i in [begin, end) across worker threads. Each index is
/// processed exactly once; fn must only write to per-index state so the
/// result is independent of scheduling.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace wildfire
