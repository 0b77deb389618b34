#include "hexsweep/solver.hpp"

#include <cmath>
#include <thread>

#include "hexsweep/errors.hpp"
#include "hexsweep/kernel.hpp"
#include "hexsweep/sweep_amt.hpp"
#include "hexsweep/sweep_serial.hpp"
#include "hexsweep/task_pool.hpp"

namespace hexsweep {

int SolverConfig::resolved_workers() const {
    if (workers > 0) {
        return workers;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void SolverConfig::validate() const {
    mesh.validate();
    if (groups < 1 || angles < 1 || moments < 1 || inner < 1 || outer < 1) {
        throw ConfigError("config: groups, angles, moments, inner and outer must be >= 1");
    }
    if (moments > kMaxMoments) {
        throw ConfigError("config: at most " + std::to_string(kMaxMoments) +
                          " flux moments are supported");
    }
    if (workers < 0) {
        throw ConfigError("config: workers must be >= 0 (0 = hardware)");
    }
    if (scheduler == Scheduler::Amt && angle_scheme == AngleScheme::Sequential) {
        throw ConfigError("config: the task scheduler always runs angles simultaneously; "
                          "sequential angle scheme applies to bsp only");
    }
    if (scheduler == Scheduler::Serial) {
        const std::int64_t unknowns = static_cast<std::int64_t>(mesh.nx) * mesh.ny * mesh.nz *
                                      groups * angles *
                                      (mesh.fem_order + 1) * (mesh.fem_order + 1) *
                                      (mesh.fem_order + 1);
        if (unknowns > 1'000'000) {
            throw ConfigError("config: serial scheduler size guard exceeded (" +
                              std::to_string(unknowns) +
                              " unknowns per octant, limit 1000000)");
        }
    }
}

ProblemSetup::ProblemSetup(const SolverConfig& config) {
    config.validate();
    const double t0 = steady_seconds();
    mesh = build_twisted_grid(config.mesh);
    geom = precompute_basis_integrals(mesh, config.mesh.fem_order);
    quad = build_quadrature(config.angles);

    angle_schedules.resize(8);
    merged.resize(8);
    deps.resize(8);
    for (int o = 0; o < 8; ++o) {
        angle_schedules[o].reserve(config.angles);
        deps[o].reserve(config.angles);
        for (int a = 0; a < config.angles; ++a) {
            const Vec3 dir = quad.direction(o, a);
            angle_schedules[o].push_back(compute_buckets(mesh, dir, o, a));
            deps[o].emplace_back(mesh, dir);
        }
        merged[o] = merge_octant_buckets(angle_schedules[o]);
    }
    build_seconds = steady_seconds() - t0;
}

RunReport run_on(ProblemSetup& setup, const SolverConfig& config, const SweepHooks* hooks) {
    config.validate();
    const double t_begin = steady_seconds();

    const int workers =
        config.scheduler == Scheduler::Serial ? 1 : config.resolved_workers();
    const ProblemShape shape{config.angles, config.groups, config.moments,
                             setup.mesh.elem_count(), setup.geom.basis};
    CrossSectionTable xs = CrossSectionTable::synthetic(shape, config.sigs_zero);
    xs.validate();
    FluxState state(shape, setup.quad);

    std::vector<ElementSolver> solvers;
    solvers.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        solvers.emplace_back(setup.mesh, setup.geom, setup.quad, xs, state);
    }
    GrindSampler grind(workers, config.grind_sampling);
    SweepContext ctx{setup.mesh, setup.geom,
                     setup.quad, xs,
                     state,      solvers,
                     &grind,     hooks,
                     0};

    std::unique_ptr<BspTeam> team;
    std::unique_ptr<TaskPool> pool;
    if (config.scheduler == Scheduler::Bsp) {
        team = std::make_unique<BspTeam>(workers);
    } else if (config.scheduler == Scheduler::Amt) {
        pool = std::make_unique<TaskPool>(workers);
    }

    RunReport report;
    report.phases.schedule_build = setup.build_seconds;
    BspStats bsp_stats;
    AmtStats amt_stats;

    for (int outer = 0; outer < config.outer; ++outer) {
        double t = steady_seconds();
        update_outer_source(state, xs, setup.mesh);
        report.phases.source_update += steady_seconds() - t;

        for (int inner = 0; inner < config.inner; ++inner) {
            t = steady_seconds();
            update_inner_source(state, xs, setup.mesh);
            report.phases.source_update += steady_seconds() - t;

            t = steady_seconds();
            for (int octant = 0; octant < 8; ++octant) {
                ctx.epoch = ++setup.epoch_cursor;
                switch (config.scheduler) {
                case Scheduler::Serial:
                    sweep_octant_serial(octant, setup.deps[octant], ctx);
                    break;
                case Scheduler::Bsp:
                    sweep_octant_bsp(octant, config.angle_scheme, setup.angle_schedules[octant],
                                     &setup.merged[octant], *team, ctx, &bsp_stats);
                    break;
                case Scheduler::Amt:
                    sweep_octant_amt(octant, setup.deps[octant], *pool, ctx, &amt_stats);
                    break;
                }
            }
            report.phases.sweep += steady_seconds() - t;
        }
        report.outer_flux.push_back(integrated_flux(state));
    }

    report.total_flux = total_integrated_flux(state);
    report.grind_samples = grind.merged();
    report.bucket_idle = std::move(bsp_stats.idle);
    report.bsp_barriers = bsp_stats.barriers;
    report.bsp_items = bsp_stats.items;
    report.amt_tasks = amt_stats.tasks;
    report.amt_steals = amt_stats.steals;
    for (int o = 0; o < 8; ++o) {
        for (int a = 0; a < config.angles; ++a) {
            const SweepSchedule& s = setup.angle_schedules[o][a];
            for (int t_level = 0; t_level < s.bucket_count(); ++t_level) {
                report.wavefront.push_back({o, a, t_level, s.bucket_size(t_level)});
            }
        }
    }
    report.phases.total = setup.build_seconds + (steady_seconds() - t_begin);
    return report;
}

RunReport run(const SolverConfig& config) {
    ProblemSetup setup(config);
    return run_on(setup, config);
}

bool flux_close(double a, double b) {
    const double tol = std::max(1e-14, 1e-10 * std::max(std::abs(a), std::abs(b)));
    return std::abs(a - b) <= tol;
}

namespace {

double rel_dev(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

} // namespace

VerifyReport verify(const SolverConfig& config) {
    VerifyReport report;
    try {
        ProblemSetup setup(config);

        const auto variant = [&](Scheduler s, AngleScheme scheme) {
            SolverConfig c = config;
            c.scheduler = s;
            c.angle_scheme = scheme;
            return c;
        };
        struct Case {
            std::string name;
            SolverConfig cfg;
        };
        const std::vector<Case> cases = {
            {"serial", variant(Scheduler::Serial, AngleScheme::Sequential)},
            {"bsp/sequential", variant(Scheduler::Bsp, AngleScheme::Sequential)},
            {"bsp/simultaneous", variant(Scheduler::Bsp, AngleScheme::Simultaneous)},
            {"amt", variant(Scheduler::Amt, AngleScheme::Simultaneous)},
        };
        for (const Case& c : cases) {
            report.run_names.push_back(c.name);
            report.runs.push_back(run_on(setup, c.cfg));
        }

        report.pass = true;
        for (std::size_t i = 0; i < report.runs.size(); ++i) {
            for (std::size_t j = i + 1; j < report.runs.size(); ++j) {
                const RunReport& ri = report.runs[i];
                const RunReport& rj = report.runs[j];
                for (int o = 0; o < config.outer; ++o) {
                    for (int g = 0; g < config.groups; ++g) {
                        const double a = ri.outer_flux[o][g];
                        const double b = rj.outer_flux[o][g];
                        if (!flux_close(a, b)) {
                            report.pass = false;
                        }
                        if (rel_dev(a, b) > report.worst_rel) {
                            report.worst_rel = rel_dev(a, b);
                            report.worst_where = report.run_names[i] + " vs " +
                                                 report.run_names[j] + " at outer " +
                                                 std::to_string(o) + " group " +
                                                 std::to_string(g);
                        }
                    }
                }
                if (!flux_close(ri.total_flux, rj.total_flux)) {
                    report.pass = false;
                }
                if (rel_dev(ri.total_flux, rj.total_flux) > report.worst_rel) {
                    report.worst_rel = rel_dev(ri.total_flux, rj.total_flux);
                    report.worst_where = report.run_names[i] + " vs " + report.run_names[j] +
                                         " at final total";
                }
            }
        }
    } catch (const std::exception& e) {
        report.pass = false;
        report.error = e.what();
    }
    return report;
}

} // namespace hexsweep
