#pragma once

#include <cstddef>
#include <functional>

namespace cmono {

// Worker count: hardware concurrency, capped by CMONO_THREADS when set (>= 1).
unsigned worker_count();

// Runs body(i) for i in [0, n). Iterations must be independent; exceptions are
// rethrown on the calling thread (the first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cmono
