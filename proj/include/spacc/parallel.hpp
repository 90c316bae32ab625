#pragma once

#include <functional>

#include "spacc/types.hpp"

namespace spacc {

/// Runs fn(i) for every i in [0, count) on up to `workers` threads.
/// Tasks must write only to disjoint state. Exceptions are captured per
/// index and the lowest-index failure is rethrown after all tasks finish,
/// so error reporting does not depend on scheduling.
void parallel_for(Index count, int workers, const std::function<void(Index)>& fn);

}  // namespace spacc
