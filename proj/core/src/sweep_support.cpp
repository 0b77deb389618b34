#include "hexsweep/sweep_support.hpp"

namespace hexsweep {

std::vector<double> GrindSampler::merged() const {
    std::vector<double> all;
    std::size_t total = 0;
    for (const auto& v : per_worker_) {
        total += v.size();
    }
    all.reserve(total);
    for (const auto& v : per_worker_) {
        all.insert(all.end(), v.begin(), v.end());
    }
    return all;
}

void solve_element_all_groups(SweepContext& ctx, int worker, int octant, int angle, int elem,
                              AccumMode mode) {
    ElementSolver& solver = ctx.solvers[worker];
    for (int g = 0; g < ctx.state.shape.groups; ++g) {
        if (ctx.grind && ctx.grind->enabled()) {
            const double t0 = steady_seconds();
            const auto psi = solver.solve(octant, angle, g, elem);
            ctx.grind->add(worker, steady_seconds() - t0);
            accumulate_flux(ctx.state, ctx.quad, octant, angle, g, elem, psi, mode);
        } else {
            const auto psi = solver.solve(octant, angle, g, elem);
            accumulate_flux(ctx.state, ctx.quad, octant, angle, g, elem, psi, mode);
        }
    }
}

} // namespace hexsweep
