#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <vector>

#include "hexsweep/flux.hpp"
#include "hexsweep/geometry.hpp"
#include "hexsweep/kernel.hpp"
#include "hexsweep/mesh.hpp"
#include "hexsweep/quadrature.hpp"

namespace hexsweep {

/// One executed work item: an (element, angle) task for the task scheduler,
/// an (element, angle, group) loop item for the bucket scheduler (group -1
/// marks whole-task records). Timestamps are steady-clock seconds.
struct TaskRecord {
    std::int32_t elem;
    std::int32_t angle;
    std::int32_t group;
    std::int32_t worker;
    double t_start;
    double t_stop;
};

class TaskTrace {
public:
    void record(const TaskRecord& r) {
        std::lock_guard<std::mutex> lk(mx_);
        records_.push_back(r);
    }
    std::vector<TaskRecord> snapshot() const {
        std::lock_guard<std::mutex> lk(mx_);
        return records_;
    }
    void clear() {
        std::lock_guard<std::mutex> lk(mx_);
        records_.clear();
    }

private:
    mutable std::mutex mx_;
    std::vector<TaskRecord> records_;
};

/// Test and instrumentation hooks. before_item runs before the first
/// assemble of a work item; after_item runs after downwind spawning (task
/// scheduler) or after accumulation (bucket scheduler), so an injected
/// delay lengthens the item without holding back work it already released.
struct SweepHooks {
    std::function<void(std::int32_t elem, std::int32_t angle)> before_item;
    std::function<void(std::int32_t elem, std::int32_t angle)> after_item;
    std::function<void(std::int32_t elem, std::int32_t angle, std::int32_t prev)>
        on_counter_increment;
    TaskTrace* trace = nullptr;
    bool check_freshness = false;
};

inline double steady_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

/// Per-worker grind-time buffers: one sample per (element, angle, group)
/// assemble + solve span.
class GrindSampler {
public:
    GrindSampler() = default;
    GrindSampler(int workers, bool enabled) : enabled_(enabled), per_worker_(workers) {}

    bool enabled() const { return enabled_; }
    void add(int worker, double seconds) { per_worker_[worker].push_back(seconds); }
    std::vector<double> merged() const;

private:
    bool enabled_ = false;
    std::vector<std::vector<double>> per_worker_;
};

/// Everything a sweep needs, bundled. solvers holds one scratch solver per
/// worker; epoch is the iteration stamp for upwind freshness checks and
/// must strictly increase between octant sweeps.
struct SweepContext {
    const HexMesh& mesh;
    const ElementGeometry& geom;
    const QuadratureSet& quad;
    const CrossSectionTable& xs;
    FluxState& state;
    std::vector<ElementSolver>& solvers;
    GrindSampler* grind = nullptr;
    const SweepHooks* hooks = nullptr;
    std::uint32_t epoch = 0;
};

/// Solve all groups of one (element, angle) in ascending group order with
/// optional grind sampling, accumulating with the given mode.
void solve_element_all_groups(SweepContext& ctx, int worker, int octant, int angle, int elem,
                              AccumMode mode);

} // namespace hexsweep
