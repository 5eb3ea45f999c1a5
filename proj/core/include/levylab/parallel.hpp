#pragma once

#include <cstddef>
#include <functional>

namespace levylab {

/// LEVYLAB_THREADS when set to a positive integer, else the hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index
/// is processed exactly once; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace levylab
