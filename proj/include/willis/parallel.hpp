#pragma once

#include <cstddef>
#include <functional>

namespace willis {

// Runs body(i) for i in [0, count) on up to `threads` workers. Iterations
// must be independent; the first exception thrown is rethrown on return.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace willis
