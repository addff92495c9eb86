#pragma once

#include <cstddef>
#include <functional>

namespace fourlin {

// Worker count: FOURLIN_THREADS when set to a positive integer, otherwise
// the hardware concurrency.
std::size_t thread_count();

// Runs body(i) for i in [0, count). Items must be independent; results are
// written by index so the outcome does not depend on scheduling. The first
// exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fourlin
