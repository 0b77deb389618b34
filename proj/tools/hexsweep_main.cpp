// Command-line driver: configure a sweep problem, run it with the chosen
// scheduler, optionally validate schedules, cross-verify all schedulers, and
// emit report tables as CSV.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "hexsweep/csv.hpp"
#include "hexsweep/errors.hpp"
#include "hexsweep/solver.hpp"

namespace {

using namespace hexsweep;

int run_validate(const SolverConfig& cfg) {
    ProblemSetup setup(cfg);
    bool all_ok = true;
    for (int o = 0; o < 8; ++o) {
        for (int a = 0; a < cfg.angles; ++a) {
            const Vec3 dir = setup.quad.direction(o, a);
            const ScheduleVerdict verdict =
                validate_schedule(setup.angle_schedules[o][a], setup.mesh, dir);
            std::printf("octant %d angle %d: %s\n", o, a, verdict.message().c_str());
            all_ok = all_ok && verdict.ok;
        }
    }
    return all_ok ? 0 : 1;
}

int run_verify(const SolverConfig& cfg) {
    const VerifyReport report = verify(cfg);
    if (!report.error.empty()) {
        std::printf("verify: FAIL (%s)\n", report.error.c_str());
        return 1;
    }
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        std::printf("  %-18s total integrated flux %.15e\n", report.run_names[i].c_str(),
                    report.runs[i].total_flux);
    }
    std::printf("worst relative deviation %.3e (%s)\n", report.worst_rel,
                report.worst_where.empty() ? "-" : report.worst_where.c_str());
    std::printf("verify: %s\n", report.pass ? "PASS" : "FAIL");
    return report.pass ? 0 : 1;
}

int run_solver(const SolverConfig& cfg, const std::string& csv_out) {
    const RunReport report = run(cfg);

    std::printf("integrated flux per group (final outer iteration):\n");
    const auto& last = report.outer_flux.back();
    for (std::size_t g = 0; g < last.size(); ++g) {
        std::printf("  group %2zu: %.15e\n", g, last[g]);
    }
    std::printf("total integrated flux: %.15e\n", report.total_flux);
    std::printf("phases [s]: schedule_build %.4f  sweep %.4f  source_update %.4f  total %.4f\n",
                report.phases.schedule_build, report.phases.sweep,
                report.phases.source_update, report.phases.total);
    if (report.bsp_barriers > 0) {
        std::printf("bsp: %lld barriers, %lld work items\n",
                    static_cast<long long>(report.bsp_barriers),
                    static_cast<long long>(report.bsp_items));
    }
    if (report.amt_tasks > 0) {
        std::printf("amt: %lld tasks, %llu steals\n", static_cast<long long>(report.amt_tasks),
                    static_cast<unsigned long long>(report.amt_steals));
    }
    if (!report.grind_samples.empty()) {
        std::printf("grind samples: %zu\n", report.grind_samples.size());
    }

    if (!csv_out.empty()) {
        for (const CsvKind kind :
             {CsvKind::GrindHist, CsvKind::Wavefront, CsvKind::Timing, CsvKind::Flux}) {
            std::printf("wrote %s\n", emit_csv(report, kind, csv_out).c_str());
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-ordinates transport sweeps on twisted hexahedral grids with "
                 "serial, bulk-synchronous and task-based schedulers"};

    SolverConfig cfg;
    std::string scheduler = "serial";
    std::string angle_scheme = "simultaneous";
    std::string twist_axis = "z";
    std::string csv_out;
    bool validate_mode = false;
    bool verify_mode = false;
    bool serial_flag = false;

    app.add_option("--nx", cfg.mesh.nx, "Elements along x")->capture_default_str();
    app.add_option("--ny", cfg.mesh.ny, "Elements along y")->capture_default_str();
    app.add_option("--nz", cfg.mesh.nz, "Elements along z")->capture_default_str();
    app.add_option("--twist", cfg.mesh.twist_angle_max,
                   "Twist angle in radians at the far end of the twist axis")
        ->capture_default_str();
    app.add_option("--twist-axis", twist_axis, "Twist axis: x, y or z")->capture_default_str();
    app.add_option("--order", cfg.mesh.fem_order, "FEM order (1, 2 or 3)")
        ->capture_default_str();
    app.add_option("--groups", cfg.groups, "Energy groups")->capture_default_str();
    app.add_option("--angles", cfg.angles, "Angles per octant (perfect square or 1)")
        ->capture_default_str();
    app.add_option("--moments", cfg.moments, "Flux moments")->capture_default_str();
    app.add_option("--inner", cfg.inner, "Inner iterations")->capture_default_str();
    app.add_option("--outer", cfg.outer, "Outer iterations")->capture_default_str();
    app.add_option("--scheduler", scheduler, "Sweep scheduler: serial, bsp or amt")
        ->capture_default_str();
    app.add_option("--angle-scheme", angle_scheme,
                   "bsp angle scheme: sequential or simultaneous")
        ->capture_default_str();
    app.add_option("--workers", cfg.workers, "Worker threads (0 = hardware concurrency)")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for randomized harnesses")->capture_default_str();
    app.add_flag("--grind-sampling", cfg.grind_sampling,
                 "Time every assemble+solve span (perturbs scheduling)");
    app.add_flag("--sigs-zero", cfg.sigs_zero, "Zero the scattering matrix");
    app.add_flag("--validate", validate_mode, "Validate bucket schedules and exit");
    app.add_flag("--verify", verify_mode,
                 "Run all schedulers and compare integrated flux (exit 1 on FAIL)");
    app.add_option("--csv-out", csv_out, "Directory for CSV report tables");
    app.add_flag("--serial", serial_flag, "Force one deterministic worker");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (scheduler == "serial") {
            cfg.scheduler = Scheduler::Serial;
        } else if (scheduler == "bsp") {
            cfg.scheduler = Scheduler::Bsp;
        } else if (scheduler == "amt") {
            cfg.scheduler = Scheduler::Amt;
        } else {
            throw ConfigError("unknown scheduler '" + scheduler + "'");
        }
        if (angle_scheme == "sequential") {
            cfg.angle_scheme = AngleScheme::Sequential;
        } else if (angle_scheme == "simultaneous") {
            cfg.angle_scheme = AngleScheme::Simultaneous;
        } else {
            throw ConfigError("unknown angle scheme '" + angle_scheme + "'");
        }
        if (twist_axis == "x") {
            cfg.mesh.twist_axis = Axis::X;
        } else if (twist_axis == "y") {
            cfg.mesh.twist_axis = Axis::Y;
        } else if (twist_axis == "z") {
            cfg.mesh.twist_axis = Axis::Z;
        } else {
            throw ConfigError("unknown twist axis '" + twist_axis + "'");
        }
        if (serial_flag) {
            cfg.workers = 1;
        }
        cfg.validate();

        if (validate_mode) {
            return run_validate(cfg);
        }
        if (verify_mode) {
            return run_verify(cfg);
        }
        return run_solver(cfg, csv_out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
