#include "hexsweep/schedule.hpp"

#include <algorithm>
#include <numeric>

#include "hexsweep/errors.hpp"

namespace hexsweep {

namespace {

std::vector<std::uint8_t> interior_inflow_counts(const HexMesh& mesh, const Vec3& direction) {
    const int ne = mesh.elem_count();
    std::vector<std::uint8_t> deg(ne, 0);
    for (int e = 0; e < ne; ++e) {
        for (int f = 0; f < kFacesPerElem; ++f) {
            if (mesh.elem_neighbors[e][f] == kBoundary) {
                continue;
            }
            if (face_orientation(mesh, e, f, direction) == FaceOrientation::Inflow) {
                ++deg[e];
            }
        }
    }
    return deg;
}

} // namespace

SweepSchedule compute_buckets(const HexMesh& mesh, const Vec3& direction, int octant, int angle) {
    const int ne = mesh.elem_count();
    std::vector<std::uint8_t> pending = interior_inflow_counts(mesh, direction);
    std::vector<std::int32_t> level(ne, 0);

    std::vector<std::int32_t> worklist;
    worklist.reserve(ne);
    for (int e = 0; e < ne; ++e) {
        if (pending[e] == 0) {
            worklist.push_back(e);
        }
    }

    int processed = 0;
    for (std::size_t head = 0; head < worklist.size(); ++head) {
        const std::int32_t e = worklist[head];
        ++processed;
        for (int f = 0; f < kFacesPerElem; ++f) {
            const std::int32_t nb = mesh.elem_neighbors[e][f];
            if (nb == kBoundary ||
                face_orientation(mesh, e, f, direction) != FaceOrientation::Outflow) {
                continue;
            }
            level[nb] = std::max(level[nb], level[e] + 1);
            if (--pending[nb] == 0) {
                worklist.push_back(nb);
            }
        }
    }
    if (processed != ne) {
        std::string stuck;
        for (int e = 0; e < ne && stuck.size() < 120; ++e) {
            if (pending[e] > 0) {
                stuck += " " + std::to_string(e);
            }
        }
        throw ScheduleError("compute_buckets: cycle detected; unresolved elements:" + stuck);
    }

    const int depth = 1 + *std::max_element(level.begin(), level.end());
    SweepSchedule sched;
    sched.octant = octant;
    sched.angle = angle;
    sched.offsets.assign(depth + 1, 0);
    for (int e = 0; e < ne; ++e) {
        ++sched.offsets[level[e] + 1];
    }
    std::partial_sum(sched.offsets.begin(), sched.offsets.end(), sched.offsets.begin());
    sched.entries.resize(ne);
    std::vector<std::int32_t> cursor(sched.offsets.begin(), sched.offsets.end() - 1);
    // Element ids ascend within each bucket because e ascends here.
    for (int e = 0; e < ne; ++e) {
        sched.entries[cursor[level[e]]++] = {e, angle};
    }
    return sched;
}

SweepSchedule merge_octant_buckets(std::span<const SweepSchedule> per_angle) {
    SweepSchedule merged;
    if (per_angle.empty()) {
        merged.offsets = {0};
        return merged;
    }
    merged.octant = per_angle.front().octant;
    merged.angle = -1;

    int depth = 0;
    std::size_t total = 0;
    for (const SweepSchedule& s : per_angle) {
        depth = std::max(depth, s.bucket_count());
        total += s.entries.size();
    }
    merged.offsets.assign(depth + 1, 0);
    merged.entries.reserve(total);
    for (int t = 0; t < depth; ++t) {
        for (const SweepSchedule& s : per_angle) {
            if (t < s.bucket_count()) {
                const auto b = s.bucket(t);
                merged.entries.insert(merged.entries.end(), b.begin(), b.end());
            }
        }
        auto* begin = merged.entries.data() + merged.offsets[t];
        std::sort(begin, merged.entries.data() + merged.entries.size(),
                  [](const SweepEntry& a, const SweepEntry& b) {
                      return a.elem != b.elem ? a.elem < b.elem : a.angle < b.angle;
                  });
        merged.offsets[t + 1] = static_cast<std::int32_t>(merged.entries.size());
    }
    return merged;
}

DependencyTable::DependencyTable(const HexMesh& mesh, const Vec3& dir) {
    direction = dir;
    in_degree = interior_inflow_counts(mesh, dir);
    const int ne = static_cast<int>(in_degree.size());
    for (int e = 0; e < ne; ++e) {
        if (in_degree[e] > kFacesPerElem) {
            throw ScheduleError("compute_dependency_counts: in_degree out of range");
        }
        if (in_degree[e] == 0) {
            roots.push_back(e);
        }
    }
    counters = std::make_unique<std::atomic<std::int32_t>[]>(ne);
    stamps = std::make_unique<std::atomic<std::uint32_t>[]>(ne);
    for (int e = 0; e < ne; ++e) {
        counters[e].store(0, std::memory_order_relaxed);
        stamps[e].store(0, std::memory_order_relaxed);
    }
}

void DependencyTable::reset_counters() {
    const int ne = elem_count();
    for (int e = 0; e < ne; ++e) {
        counters[e].store(0, std::memory_order_relaxed);
    }
}

DependencyTable compute_dependency_counts(const HexMesh& mesh, const Vec3& direction) {
    return DependencyTable(mesh, direction);
}

void reset_counters(std::span<DependencyTable> tables) {
    for (DependencyTable& t : tables) {
        t.reset_counters();
    }
}

std::string ScheduleVerdict::message() const {
    if (ok) {
        return "OK";
    }
    return "violation: element " + std::to_string(elem) + " at level " + std::to_string(level) +
           " scheduled before upwind neighbor " + std::to_string(upwind);
}

ScheduleVerdict validate_schedule(const SweepSchedule& schedule, const HexMesh& mesh,
                                  const Vec3& direction) {
    const int ne = mesh.elem_count();
    std::vector<std::int32_t> level(ne, -1);
    for (int t = 0; t < schedule.bucket_count(); ++t) {
        for (const SweepEntry& entry : schedule.bucket(t)) {
            level[entry.elem] = t;
        }
    }
    for (int t = 0; t < schedule.bucket_count(); ++t) {
        for (const SweepEntry& entry : schedule.bucket(t)) {
            for (int f = 0; f < kFacesPerElem; ++f) {
                const std::int32_t nb = mesh.elem_neighbors[entry.elem][f];
                if (nb == kBoundary ||
                    face_orientation(mesh, entry.elem, f, direction) != FaceOrientation::Inflow) {
                    continue;
                }
                if (level[nb] < 0 || level[nb] >= t) {
                    return {false, entry.elem, t, nb};
                }
            }
        }
    }
    return {};
}

} // namespace hexsweep
