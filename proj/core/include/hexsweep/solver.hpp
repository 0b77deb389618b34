#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hexsweep/flux.hpp"
#include "hexsweep/geometry.hpp"
#include "hexsweep/mesh.hpp"
#include "hexsweep/quadrature.hpp"
#include "hexsweep/schedule.hpp"
#include "hexsweep/sweep_bsp.hpp"
#include "hexsweep/sweep_support.hpp"

namespace hexsweep {

enum class Scheduler { Serial, Bsp, Amt };

struct SolverConfig {
    MeshConfig mesh;
    int groups = 1;
    int angles = 1;  // per octant
    int moments = 1;
    int inner = 1;
    int outer = 1;
    Scheduler scheduler = Scheduler::Serial;
    AngleScheme angle_scheme = AngleScheme::Simultaneous;
    int workers = 0; // 0 -> hardware concurrency
    std::uint64_t seed = 0;
    bool grind_sampling = false;
    bool sigs_zero = false;

    int resolved_workers() const;
    void validate() const; // throws ConfigError
};

struct PhaseTimes {
    double schedule_build = 0.0; // mesh, geometry, quadrature and schedules
    double sweep = 0.0;
    double source_update = 0.0;
    double total = 0.0;
};

struct WavefrontRow {
    int octant;
    int angle;
    int t_level;
    int element_count;
};

struct RunReport {
    std::vector<std::vector<double>> outer_flux; // [outer][group]
    double total_flux = 0.0;
    PhaseTimes phases;
    std::vector<double> grind_samples;
    std::vector<BucketIdleRecord> bucket_idle; // bsp only
    std::int64_t bsp_barriers = 0;
    std::int64_t bsp_items = 0;
    std::int64_t amt_tasks = 0;
    std::uint64_t amt_steals = 0;
    std::vector<WavefrontRow> wavefront; // bucket sizes per (octant, angle)
};

/// Everything that can be precomputed once and shared across scheduler runs
/// of the same mesh/order/angle configuration: grid, integral tables, angle
/// set, per-angle bucket schedules, merged octant schedules, and dependency
/// tables. Cross sections and flux arrays are per-run (they depend on the
/// group count).
class ProblemSetup {
public:
    explicit ProblemSetup(const SolverConfig& config);

    HexMesh mesh;
    ElementGeometry geom;
    QuadratureSet quad;
    std::vector<std::vector<SweepSchedule>> angle_schedules; // [octant][angle]
    std::vector<SweepSchedule> merged;                       // [octant]
    std::vector<std::vector<DependencyTable>> deps;          // [octant][angle]
    double build_seconds = 0.0;
    // Iteration stamps live in the dependency tables, so the epoch must keep
    // increasing across runs that share this setup.
    std::uint32_t epoch_cursor = 0;
};

/// Execute the configured iteration on prebuilt assets. hooks, when given,
/// are threaded through to the sweeps (test instrumentation).
RunReport run_on(ProblemSetup& setup, const SolverConfig& config,
                 const SweepHooks* hooks = nullptr);

/// Build + run.
RunReport run(const SolverConfig& config);

struct VerifyReport {
    bool pass = false;
    double worst_rel = 0.0;
    std::string worst_where;
    std::string error; // non-empty if a run failed outright
    std::vector<std::string> run_names;
    std::vector<RunReport> runs;
};

/// Run serial, both bucket schemes and the task scheduler on identical
/// inputs and compare every per-outer per-group integrated flux and the
/// final totals pairwise at relative tolerance 1e-10 (absolute floor 1e-14).
VerifyReport verify(const SolverConfig& config);

/// The comparison predicate used by verify.
bool flux_close(double a, double b);

} // namespace hexsweep
