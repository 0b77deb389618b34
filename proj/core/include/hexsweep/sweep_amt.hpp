#pragma once

#include <cstdint>
#include <span>

#include "hexsweep/schedule.hpp"
#include "hexsweep/sweep_support.hpp"
#include "hexsweep/task_pool.hpp"

namespace hexsweep {

struct AmtStats {
    std::int64_t tasks = 0;
    std::uint64_t steals = 0;
};

/// Recursive work-first octant sweep: one root task per in-degree-0 element
/// per angle, all energy groups solved inside each task, atomic flux
/// accumulation. A finished task increments the atomic progress counter of
/// each downwind neighbor; the increment that completes the neighbor's
/// in-degree spawns its task, hinted at the worker that last wrote the
/// upwind flux across the largest shared face. No barrier exists between
/// t-levels; the call returns at pool quiescence after exactly
/// elements * angles tasks.
void sweep_octant_amt(int octant, std::span<DependencyTable> deps, TaskPool& pool,
                      SweepContext& ctx, AmtStats* stats = nullptr);

} // namespace hexsweep
