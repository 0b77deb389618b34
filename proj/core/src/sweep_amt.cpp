#include "hexsweep/sweep_amt.hpp"

#include <atomic>
#include <mutex>
#include <vector>

#include "hexsweep/errors.hpp"

namespace hexsweep {

namespace {

struct AmtSweep {
    SweepContext& ctx;
    TaskPool& pool;
    int octant;
    std::span<DependencyTable> deps;
    std::vector<std::int32_t> last_writer; // (angle, elem) -> worker id
    std::atomic<std::int64_t> executed{0};
    std::atomic<bool> failed{false};
    std::mutex err_mx;
    std::exception_ptr first_error;

    AmtSweep(SweepContext& c, TaskPool& p, int oct, std::span<DependencyTable> d)
        : ctx(c), pool(p), octant(oct), deps(d),
          last_writer(d.size() * static_cast<std::size_t>(c.mesh.elem_count()), 0) {}

    void fail(std::exception_ptr e) {
        {
            std::lock_guard<std::mutex> lk(err_mx);
            if (!first_error) {
                first_error = e;
            }
        }
        failed.store(true);
    }

    int affinity_for(std::int32_t elem, std::int32_t angle, const Vec3& dir) const {
        const std::int32_t* writers =
            last_writer.data() + static_cast<std::size_t>(angle) * ctx.mesh.elem_count();
        double best_area = -1.0;
        int hint = 0;
        for (int f = 0; f < kFacesPerElem; ++f) {
            const std::int32_t nb = ctx.mesh.elem_neighbors[elem][f];
            if (nb == kBoundary ||
                face_orientation(ctx.mesh, elem, f, dir) != FaceOrientation::Inflow) {
                continue;
            }
            const double area = norm(ctx.mesh.normals[elem][f]);
            const int w = writers[nb];
            if (area > best_area) {
                best_area = area;
                hint = w;
            } else if (area == best_area && w < hint) {
                hint = w;
            }
        }
        return hint;
    }

    void run_task(std::int32_t elem, std::int32_t angle) {
        if (failed.load(std::memory_order_relaxed)) {
            return; // drain quietly once a task has failed
        }
        try {
            const double t0 = steady_seconds();
            DependencyTable& dep = deps[angle];
            const Vec3 dir = ctx.quad.direction(octant, angle);

            if (ctx.hooks && ctx.hooks->before_item) {
                ctx.hooks->before_item(elem, angle);
            }
            if (ctx.hooks && ctx.hooks->check_freshness) {
                for (int f = 0; f < kFacesPerElem; ++f) {
                    const std::int32_t nb = ctx.mesh.elem_neighbors[elem][f];
                    if (nb == kBoundary ||
                        face_orientation(ctx.mesh, elem, f, dir) != FaceOrientation::Inflow) {
                        continue;
                    }
                    if (dep.stamps[nb].load(std::memory_order_acquire) != ctx.epoch) {
                        throw SweepError("sweep_octant_amt: task (" + std::to_string(elem) +
                                         ", " + std::to_string(angle) +
                                         ") started before upwind element " +
                                         std::to_string(nb) + " was fresh");
                    }
                }
            }

            const int worker = std::max(pool.current_worker(), 0);
            solve_element_all_groups(ctx, worker, octant, angle, elem, AccumMode::Atomic);
            dep.stamps[elem].store(ctx.epoch, std::memory_order_release);
            last_writer[static_cast<std::size_t>(angle) * ctx.mesh.elem_count() + elem] = worker;

            for (int f = 0; f < kFacesPerElem; ++f) {
                const std::int32_t nb = ctx.mesh.elem_neighbors[elem][f];
                if (nb == kBoundary ||
                    face_orientation(ctx.mesh, elem, f, dir) != FaceOrientation::Outflow) {
                    continue;
                }
                const std::int32_t prev =
                    dep.counters[nb].fetch_add(1, std::memory_order_acq_rel);
                if (ctx.hooks && ctx.hooks->on_counter_increment) {
                    ctx.hooks->on_counter_increment(nb, angle, prev);
                }
                if (prev + 1 > dep.in_degree[nb]) {
                    throw SweepError("sweep_octant_amt: counter overshoot on element " +
                                     std::to_string(nb) + " (observed " +
                                     std::to_string(prev + 1) + " > in_degree " +
                                     std::to_string(dep.in_degree[nb]) + ")");
                }
                if (prev + 1 == dep.in_degree[nb]) {
                    pool.spawn([this, nb, angle] { run_task(nb, angle); },
                               affinity_for(nb, angle, dir));
                }
            }

            if (ctx.hooks && ctx.hooks->after_item) {
                ctx.hooks->after_item(elem, angle);
            }
            executed.fetch_add(1, std::memory_order_relaxed);
            if (ctx.hooks && ctx.hooks->trace) {
                ctx.hooks->trace->record({elem, angle, -1, worker, t0, steady_seconds()});
            }
        } catch (...) {
            fail(std::current_exception());
        }
    }
};

} // namespace

void sweep_octant_amt(int octant, std::span<DependencyTable> deps, TaskPool& pool,
                      SweepContext& ctx, AmtStats* stats) {
    reset_counters(deps);
    AmtSweep sweep(ctx, pool, octant, deps);
    const std::uint64_t steals_before = pool.steal_count();

    // All roots are enqueued by one bootstrap task so none can start running
    // mid-spawn. They go in in reverse so the LIFO pop order of a one-worker
    // pool is ascending (angle, element), matching the serial execution
    // order; with more workers thieves drain them FIFO from the other end.
    pool.spawn([&sweep, &pool, deps] {
        for (int a = static_cast<int>(deps.size()) - 1; a >= 0; --a) {
            const auto& roots = deps[a].roots;
            for (auto it = roots.rbegin(); it != roots.rend(); ++it) {
                const std::int32_t root = *it;
                pool.spawn([&sweep, root, a] { sweep.run_task(root, a); });
            }
        }
    });
    pool.run_until_quiescent();

    if (sweep.first_error) {
        std::rethrow_exception(sweep.first_error);
    }
    const std::int64_t expected =
        static_cast<std::int64_t>(ctx.mesh.elem_count()) * static_cast<std::int64_t>(deps.size());
    const std::int64_t executed = sweep.executed.load();
    if (executed != expected) {
        throw SweepError("sweep_octant_amt: executed " + std::to_string(executed) +
                         " tasks, expected " + std::to_string(expected));
    }
    if (stats) {
        stats->tasks += executed;
        stats->steals += pool.steal_count() - steals_before;
    }
}

} // namespace hexsweep
