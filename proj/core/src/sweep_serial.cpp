#include "hexsweep/sweep_serial.hpp"

#include <algorithm>

#include "hexsweep/errors.hpp"

namespace hexsweep {

void sweep_octant_serial(int octant, std::span<DependencyTable> deps, SweepContext& ctx) {
    const int angles = static_cast<int>(deps.size());
    for (int a = 0; a < angles; ++a) {
        DependencyTable& dep = deps[a];
        dep.reset_counters();
        const Vec3 dir = ctx.quad.direction(octant, a);

        // Explicit stack, candidates pushed in reverse so the lowest element
        // id is expanded first (pre-order of the recursion).
        std::vector<std::int32_t> stack(dep.roots.rbegin(), dep.roots.rend());
        std::int64_t visited = 0;
        while (!stack.empty()) {
            const std::int32_t elem = stack.back();
            stack.pop_back();

            const double t0 = steady_seconds();
            if (ctx.hooks && ctx.hooks->before_item) {
                ctx.hooks->before_item(elem, a);
            }
            solve_element_all_groups(ctx, 0, octant, a, elem, AccumMode::Exclusive);
            dep.stamps[elem].store(ctx.epoch, std::memory_order_relaxed);
            ++visited;

            std::int32_t ready[kFacesPerElem];
            int n_ready = 0;
            for (int f = 0; f < kFacesPerElem; ++f) {
                const std::int32_t nb = ctx.mesh.elem_neighbors[elem][f];
                if (nb == kBoundary ||
                    face_orientation(ctx.mesh, elem, f, dir) != FaceOrientation::Outflow) {
                    continue;
                }
                const std::int32_t prev =
                    dep.counters[nb].fetch_add(1, std::memory_order_relaxed);
                if (ctx.hooks && ctx.hooks->on_counter_increment) {
                    ctx.hooks->on_counter_increment(nb, a, prev);
                }
                if (prev + 1 == dep.in_degree[nb]) {
                    ready[n_ready++] = nb;
                }
            }
            std::sort(ready, ready + n_ready, std::greater<>());
            stack.insert(stack.end(), ready, ready + n_ready);

            if (ctx.hooks && ctx.hooks->after_item) {
                ctx.hooks->after_item(elem, a);
            }
            if (ctx.hooks && ctx.hooks->trace) {
                ctx.hooks->trace->record({elem, a, -1, 0, t0, steady_seconds()});
            }
        }
        if (visited != ctx.mesh.elem_count()) {
            throw SweepError("sweep_octant_serial: visited " + std::to_string(visited) +
                             " of " + std::to_string(ctx.mesh.elem_count()) + " elements");
        }
    }
}

} // namespace hexsweep
