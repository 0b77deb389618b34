#pragma once

#include <span>

#include "hexsweep/schedule.hpp"
#include "hexsweep/sweep_support.hpp"

namespace hexsweep {

/// Single-threaded depth-first execution of the recursive sweep: angles in
/// ascending order, spawn candidates visited lowest element id first,
/// exclusive flux accumulation. The ground truth the parallel schedulers
/// are verified against.
void sweep_octant_serial(int octant, std::span<DependencyTable> deps, SweepContext& ctx);

} // namespace hexsweep
