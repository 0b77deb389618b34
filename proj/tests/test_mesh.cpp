#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hexsweep/errors.hpp"
#include "hexsweep/gauss.hpp"
#include "hexsweep/mesh.hpp"

using namespace hexsweep;

namespace {

MeshConfig cube_config(int n, double twist) {
    MeshConfig cfg;
    cfg.nx = cfg.ny = cfg.nz = n;
    cfg.twist_angle_max = twist;
    return cfg;
}

} // namespace

TEST_CASE("element and node counts") {
    const HexMesh mesh = build_twisted_grid(cube_config(16, 0.5));
    CHECK(mesh.elem_count() == 4096);
    CHECK(mesh.node_count() == 4913);
}

TEST_CASE("untwisted 2x2x2 interior face normals are unit axis vectors") {
    const HexMesh mesh = build_twisted_grid(cube_config(2, 0.0));
    for (int e = 0; e < mesh.elem_count(); ++e) {
        for (int f = 0; f < kFacesPerElem; ++f) {
            if (mesh.elem_neighbors[e][f] == kBoundary) {
                continue;
            }
            const Vec3 n = mesh.normals[e][f];
            CHECK(norm(n) == doctest::Approx(1.0).epsilon(1e-12));
            // Exactly one nonzero component of magnitude 1.
            const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
            CHECK(std::max({ax, ay, az}) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(ax + ay + az == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("topology is invariant under twist") {
    const HexMesh flat = build_twisted_grid(cube_config(4, 0.0));
    const HexMesh bent = build_twisted_grid(cube_config(4, 0.5));
    REQUIRE(flat.elem_count() == bent.elem_count());
    for (int e = 0; e < flat.elem_count(); ++e) {
        CHECK(flat.elem_neighbors[e] == bent.elem_neighbors[e]);
        CHECK(flat.elem_nodes[e] == bent.elem_nodes[e]);
    }
}

TEST_CASE("neighbor reciprocity and antiparallel shared normals") {
    const HexMesh mesh = build_twisted_grid(cube_config(4, 0.5));
    for (int e = 0; e < mesh.elem_count(); ++e) {
        for (int f = 0; f < kFacesPerElem; ++f) {
            const std::int32_t nb = mesh.elem_neighbors[e][f];
            if (nb == kBoundary) {
                continue;
            }
            bool reciprocal = false;
            for (int ff = 0; ff < kFacesPerElem; ++ff) {
                if (mesh.elem_neighbors[nb][ff] == e) {
                    reciprocal = true;
                    const Vec3 a = (1.0 / norm(mesh.normals[e][f])) * mesh.normals[e][f];
                    const Vec3 b = (1.0 / norm(mesh.normals[nb][ff])) * mesh.normals[nb][ff];
                    CHECK(norm(a + b) < 1e-12);
                }
            }
            CHECK(reciprocal);
        }
    }
}

TEST_CASE("per-element area-weighted normals close up") {
    const HexMesh mesh = build_twisted_grid(cube_config(3, 0.5));
    for (int e = 0; e < mesh.elem_count(); ++e) {
        Vec3 sum;
        for (int f = 0; f < kFacesPerElem; ++f) {
            sum += mesh.normals[e][f];
        }
        CHECK(norm(sum) < 1e-10);
    }
}

TEST_CASE("face orientation on the untwisted grid") {
    const HexMesh mesh = build_twisted_grid(cube_config(2, 0.0));
    const int e = mesh.elem_index(0, 0, 0);
    CHECK(face_orientation(mesh, e, 1, {1, 0, 0}) == FaceOrientation::Outflow);
    CHECK(face_orientation(mesh, e, 1, {-1, 0, 0}) == FaceOrientation::Inflow);
    CHECK(face_orientation(mesh, e, 1, {0, 1, 0}) == FaceOrientation::Tangent);
}

TEST_CASE("twisted 4x4x4 keeps every quadrature detJ positive") {
    // Independent check: central finite differences of the geometry map
    // approximate the Jacobian columns at every volume quadrature point.
    MeshConfig cfg = cube_config(4, 0.5);
    const HexMesh mesh = build_twisted_grid(cfg); // build itself validates
    const GaussRule rule = gauss_legendre_unit(cfg.fem_order + 1);
    const double h = 1e-6;
    for (int e = 0; e < mesh.elem_count(); ++e) {
        for (const double qz : rule.points) {
            for (const double qy : rule.points) {
                for (const double qx : rule.points) {
                    const Vec3 r{qx, qy, qz};
                    const Vec3 dx = (1.0 / (2 * h)) * (mesh.map_point(e, {qx + h, qy, qz}) -
                                                       mesh.map_point(e, {qx - h, qy, qz}));
                    const Vec3 dy = (1.0 / (2 * h)) * (mesh.map_point(e, {qx, qy + h, qz}) -
                                                       mesh.map_point(e, {qx, qy - h, qz}));
                    const Vec3 dz = (1.0 / (2 * h)) * (mesh.map_point(e, {qx, qy, qz + h}) -
                                                       mesh.map_point(e, {qx, qy, qz - h}));
                    CHECK(dot(dx, cross(dy, dz)) > 0.0);
                }
            }
        }
    }
}

TEST_CASE("excessive twist is rejected with the offending element") {
    MeshConfig cfg = cube_config(4, 40.0);
    CHECK_THROWS_AS(build_twisted_grid(cfg), MeshError);
    try {
        build_twisted_grid(cfg);
    } catch (const MeshError& e) {
        CHECK(std::string(e.what()).find("element") != std::string::npos);
    }
}

TEST_CASE("twist axis variants build and keep counts") {
    for (const Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        MeshConfig cfg;
        cfg.nx = 2;
        cfg.ny = 3;
        cfg.nz = 4;
        cfg.twist_angle_max = 0.4;
        cfg.twist_axis = axis;
        const HexMesh mesh = build_twisted_grid(cfg);
        CHECK(mesh.elem_count() == 24);
        CHECK(mesh.node_count() == 3 * 4 * 5);
    }
}

TEST_CASE("config validation") {
    MeshConfig cfg;
    cfg.nx = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = MeshConfig{};
    cfg.fem_order = 4;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("json dump smoke") {
    const HexMesh mesh = build_twisted_grid(cube_config(2, 0.3));
    const auto path = std::filesystem::temp_directory_path() / "hexsweep_mesh_dump.json";
    dump_mesh_json(mesh, path.string());
    CHECK(std::filesystem::file_size(path) > 0);
    std::filesystem::remove(path);
}
