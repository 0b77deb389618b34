#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hexsweep/mesh.hpp"

namespace hexsweep {

struct SweepEntry {
    std::int32_t elem;
    std::int32_t angle; // -1 in single-angle schedules
};

/// Longest-path level (t-level) buckets for one sweep direction, or the
/// octant-merged union of several angles. Every element appears exactly
/// once per angle; each bucket only depends on earlier buckets.
class SweepSchedule {
public:
    int octant = -1;
    int angle = -1; // -1 once merged
    std::vector<SweepEntry> entries;       // bucket-major
    std::vector<std::int32_t> offsets;     // size bucket_count + 1

    int bucket_count() const { return static_cast<int>(offsets.size()) - 1; }
    std::span<const SweepEntry> bucket(int t) const {
        return {entries.data() + offsets[t], entries.data() + offsets[t + 1]};
    }
    int bucket_size(int t) const { return offsets[t + 1] - offsets[t]; }
};

/// Kahn-style level assignment: t(e) = 0 for elements with no interior
/// upwind face, else 1 + max over upwind neighbors. Buckets are sorted by
/// element id. Throws ScheduleError on a cycle (degenerate geometry).
SweepSchedule compute_buckets(const HexMesh& mesh, const Vec3& direction, int octant = -1,
                              int angle = -1);

/// Concatenate the same t-level across all angles of one octant and sort
/// each merged bucket by (element, angle).
SweepSchedule merge_octant_buckets(std::span<const SweepSchedule> per_angle);

/// Interior upwind-face counts and atomic progress counters for one sweep
/// direction. Counters (and the iteration stamps used by the freshness
/// checks) are the only mutable state; everything else is read-only after
/// construction.
class DependencyTable {
public:
    DependencyTable() = default;
    DependencyTable(const HexMesh& mesh, const Vec3& direction);

    Vec3 direction;
    std::vector<std::uint8_t> in_degree;  // per element, <= 6
    std::vector<std::int32_t> roots;      // ascending element ids
    std::unique_ptr<std::atomic<std::int32_t>[]> counters;
    std::unique_ptr<std::atomic<std::uint32_t>[]> stamps;

    int elem_count() const { return static_cast<int>(in_degree.size()); }
    void reset_counters();
};

DependencyTable compute_dependency_counts(const HexMesh& mesh, const Vec3& direction);

/// Reset the progress counters of every angle's table before an octant sweep.
void reset_counters(std::span<DependencyTable> tables);

struct ScheduleVerdict {
    bool ok = true;
    std::int32_t elem = -1;   // first violating entry
    std::int32_t level = -1;
    std::int32_t upwind = -1; // the not-yet-scheduled upwind neighbor
    std::string message() const;
};

/// True iff every entry's interior upwind neighbors appear at a strictly
/// earlier level. Only meaningful for single-angle schedules.
ScheduleVerdict validate_schedule(const SweepSchedule& schedule, const HexMesh& mesh,
                                  const Vec3& direction);

} // namespace hexsweep
