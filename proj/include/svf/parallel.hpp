// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace svf {

// Worker count: hardware concurrency, capped by the SVF_THREADS environment
// variable when it is set to a positive integer.
unsigned worker_count();

// Runs body(i) for i in [0, n). Each index must write only its own output
// slot; results are then independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace svf
