#pragma once

#include <cstdint>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "hexsweep/schedule.hpp"
#include "hexsweep/sweep_support.hpp"

namespace hexsweep {

enum class AngleScheme { Sequential, Simultaneous };

/// Persistent fork-join worker team: run(job) invokes job(worker_id) on
/// every worker and returns once all have finished.
class BspTeam {
public:
    explicit BspTeam(int workers);
    ~BspTeam();
    BspTeam(const BspTeam&) = delete;
    BspTeam& operator=(const BspTeam&) = delete;

    void run(const std::function<void(int)>& job);
    int workers() const { return static_cast<int>(threads_.size()); }

private:
    void loop(int id);

    std::vector<std::thread> threads_;
    std::mutex mx_;
    std::condition_variable cv_;
    const std::function<void(int)>* job_ = nullptr;
    std::uint64_t epoch_ = 0;
    int done_ = 0;
    bool stop_ = false;
    std::exception_ptr err_;
};

struct BucketIdleRecord {
    int octant;
    int angle; // -1 for merged passes
    int t_level;
    double idle_seconds; // max worker busy span minus the mean
};

struct BspStats {
    std::int64_t barriers = 0;
    std::int64_t items = 0;
    std::vector<BucketIdleRecord> idle;
};

/// Bulk-synchronous octant sweep: for each bucket, the (entry x group)
/// cross product is statically block-partitioned across the team and every
/// worker waits at a barrier before the next bucket. Sequential mode loops
/// the per-angle schedules outermost with exclusive accumulation;
/// simultaneous mode runs the merged schedule with atomic accumulation.
void sweep_octant_bsp(int octant, AngleScheme scheme,
                      std::span<const SweepSchedule> angle_schedules,
                      const SweepSchedule* merged, BspTeam& team, SweepContext& ctx,
                      BspStats* stats = nullptr);

} // namespace hexsweep
