#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hexsweep/csv.hpp"
#include "hexsweep/errors.hpp"
#include "hexsweep/solver.hpp"
#include "oracles.hpp"

using namespace hexsweep;

namespace {

SolverConfig base_config(int n, int groups, int angles) {
    SolverConfig cfg;
    cfg.mesh.nx = cfg.mesh.ny = cfg.mesh.nz = n;
    cfg.mesh.twist_angle_max = 0.5;
    cfg.groups = groups;
    cfg.angles = angles;
    cfg.inner = 2;
    cfg.outer = 2;
    return cfg;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string content = ss.str();
    CHECK(content.find('\r') == std::string::npos); // LF only
    std::vector<std::string> lines;
    std::string line;
    std::istringstream is(content);
    while (std::getline(is, line)) {
        lines.push_back(line);
    }
    return lines;
}

} // namespace

TEST_CASE("config validation") {
    SolverConfig cfg = base_config(2, 1, 1);
    cfg.scheduler = Scheduler::Amt;
    cfg.angle_scheme = AngleScheme::Sequential;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = base_config(2, 0, 1);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    cfg = base_config(2, 1, 1);
    cfg.moments = 17;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    // Serial size guard: 32^3 * 8 groups * 4 angles * 8 basis > 1e6.
    cfg = base_config(32, 8, 4);
    cfg.scheduler = Scheduler::Serial;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.scheduler = Scheduler::Bsp;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("report shape and serial determinism") {
    SolverConfig cfg = base_config(2, 3, 1);
    const RunReport a = run(cfg);
    const RunReport b = run(cfg);
    REQUIRE(a.outer_flux.size() == 2);
    for (const auto& per_group : a.outer_flux) {
        CHECK(per_group.size() == 3);
    }
    CHECK(a.outer_flux == b.outer_flux);
    CHECK(a.total_flux == b.total_flux);
    const double phase_sum =
        a.phases.schedule_build + a.phases.sweep + a.phases.source_update;
    CHECK(phase_sum <= a.phases.total + 1e-9);
}

TEST_CASE("zero scattering makes every outer iteration identical") {
    SolverConfig cfg = base_config(2, 2, 1);
    cfg.sigs_zero = true;
    cfg.outer = 3;
    const RunReport r = run(cfg);
    for (std::size_t o = 1; o < r.outer_flux.size(); ++o) {
        CHECK(r.outer_flux[o] == r.outer_flux[0]);
    }
}

TEST_CASE("verify passes on small twisted configs") {
    SolverConfig cfg = base_config(3, 2, 4);
    cfg.workers = 2;
    const VerifyReport report = verify(cfg);
    CHECK(report.error.empty());
    CHECK(report.pass);
    CHECK(report.worst_rel < 1e-10);
    CHECK(report.runs.size() == 4);

    SUBCASE("single worker") {
        cfg.workers = 1;
        CHECK(verify(cfg).pass);
    }
}

TEST_CASE("a corrupted dependency count is caught") {
    SolverConfig cfg = base_config(3, 1, 1);
    cfg.scheduler = Scheduler::Amt;
    cfg.workers = 2;
    ProblemSetup setup(cfg);

    SolverConfig serial_cfg = cfg;
    serial_cfg.scheduler = Scheduler::Serial;
    const RunReport ref = run_on(setup, serial_cfg);

    // Drop one in-degree on an interior element of octant 0, angle 0.
    DependencyTable& dep = setup.deps[0][0];
    const int victim = setup.mesh.elem_index(1, 1, 1);
    REQUIRE(dep.in_degree[victim] == 3);
    dep.in_degree[victim] = 2;

    bool caught = false;
    try {
        const RunReport r = run_on(setup, cfg);
        double worst = 0.0;
        for (std::size_t o = 0; o < ref.outer_flux.size(); ++o) {
            for (std::size_t g = 0; g < ref.outer_flux[o].size(); ++g) {
                const double x = ref.outer_flux[o][g], y = r.outer_flux[o][g];
                worst = std::max(worst,
                                 std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}));
            }
        }
        caught = worst > 1e-10;
    } catch (const SweepError&) {
        caught = true; // counter overshoot is the expected failure mode
    }
    CHECK(caught);
}

TEST_CASE("coupled two-group iteration matches the dense global reference") {
    // 2x2x2 mesh with an extra 0 -> 1 scattering channel, 20 outer and 20
    // inner iterations; the reference solves each angle's global system
    // directly with the independent LU.
    SolverConfig cfg;
    cfg.mesh.nx = cfg.mesh.ny = cfg.mesh.nz = 2;
    cfg.mesh.twist_angle_max = 0.5;
    cfg.groups = 2;
    cfg.angles = 1;
    cfg.inner = 20;
    cfg.outer = 20;

    ProblemSetup setup(cfg);
    const ProblemShape shape{cfg.angles, cfg.groups, cfg.moments, setup.mesh.elem_count(),
                             setup.geom.basis};
    CrossSectionTable xs = CrossSectionTable::synthetic(shape, false);
    xs.sigs[0 * 2 + 1] = 0.1 * xs.sigt_at(0, 0); // sigs(moment 0, 0 -> 1)

    const oracle::GlobalReferenceResult expect = oracle::global_power_iteration(
        setup.mesh, setup.geom, setup.quad, xs, cfg.groups, cfg.moments, cfg.inner, cfg.outer);

    // Run the sweep iteration with the same overridden cross sections.
    FluxState state(shape, setup.quad);
    std::vector<ElementSolver> solvers;
    solvers.emplace_back(setup.mesh, setup.geom, setup.quad, xs, state);
    GrindSampler grind(1, false);
    SweepContext ctx{setup.mesh, setup.geom, setup.quad, xs, state, solvers,
                     &grind,     nullptr,    0};
    std::vector<std::vector<double>> got;
    for (int outer = 0; outer < cfg.outer; ++outer) {
        update_outer_source(state, xs, setup.mesh);
        for (int inner = 0; inner < cfg.inner; ++inner) {
            update_inner_source(state, xs, setup.mesh);
            for (int octant = 0; octant < 8; ++octant) {
                ctx.epoch += 1;
                sweep_octant_serial(octant, setup.deps[octant], ctx);
            }
        }
        got.push_back(integrated_flux(state));
    }

    REQUIRE(got.size() == expect.outer_flux.size());
    for (std::size_t o = 0; o < got.size(); ++o) {
        for (int g = 0; g < cfg.groups; ++g) {
            const double x = got[o][g], y = expect.outer_flux[o][g];
            CHECK(std::abs(x - y) / std::max(std::abs(y), 1e-300) < 1e-8);
        }
    }
    const double total = total_integrated_flux(state);
    CHECK(std::abs(total - expect.total_flux) / std::abs(expect.total_flux) < 1e-8);
}

TEST_CASE("csv emission") {
    const auto dir = std::filesystem::temp_directory_path() / "hexsweep_csv_test";
    std::filesystem::remove_all(dir);

    SolverConfig cfg = base_config(2, 2, 1);
    cfg.grind_sampling = true;
    const RunReport r = run(cfg);

    SUBCASE("flux rows are outer*groups plus the total") {
        const std::string path = emit_csv(r, CsvKind::Flux, dir.string());
        const auto lines = read_lines(path);
        CHECK(lines[0] == "outer_iter,group,integrated_flux");
        CHECK(lines.size() == 1u + 2 * 2 + 1);
        CHECK(lines.back().rfind("total,all,", 0) == 0);
    }

    SUBCASE("grind histogram has 64 bins and full sample coverage") {
        const std::string path = emit_csv(r, CsvKind::GrindHist, dir.string());
        const auto lines = read_lines(path);
        CHECK(lines[0] == "bin_lower_s,bin_upper_s,count");
        REQUIRE(lines.size() == 65);
        long total = 0;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            total += std::stol(lines[i].substr(lines[i].rfind(',') + 1));
        }
        CHECK(total == static_cast<long>(r.grind_samples.size()));
    }

    SUBCASE("empty grind sampling yields all-zero counts") {
        RunReport empty = r;
        empty.grind_samples.clear();
        const std::string path = emit_csv(empty, CsvKind::GrindHist, dir.string());
        const auto lines = read_lines(path);
        REQUIRE(lines.size() == 65);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            CHECK(lines[i].substr(lines[i].rfind(',') + 1) == "0");
        }
    }

    SUBCASE("timing and wavefront tables") {
        const auto timing = read_lines(emit_csv(r, CsvKind::Timing, dir.string()));
        CHECK(timing[0] == "phase,seconds");
        CHECK(timing.size() == 5);
        const auto wavefront = read_lines(emit_csv(r, CsvKind::Wavefront, dir.string()));
        CHECK(wavefront[0] == "octant,angle,t_level,element_count");
        CHECK(wavefront.size() == 1u + r.wavefront.size());
    }

    std::filesystem::remove_all(dir);
}

TEST_CASE("wavefront table covers 46 levels per direction on the 16^3 grid") {
    SolverConfig cfg;
    cfg.mesh.nx = cfg.mesh.ny = cfg.mesh.nz = 16;
    cfg.mesh.twist_angle_max = 0.0;
    cfg.groups = 1;
    cfg.angles = 1;
    cfg.inner = 1;
    cfg.outer = 1;
    const RunReport r = run(cfg);
    CHECK(r.wavefront.size() == 8u * 46);
    long elems = 0;
    for (const WavefrontRow& row : r.wavefront) {
        CHECK(row.t_level < 46);
        elems += row.element_count;
    }
    CHECK(elems == 8L * 4096);
}
