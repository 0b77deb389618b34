#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hexsweep/geometry.hpp"
#include "hexsweep/mesh.hpp"

using namespace hexsweep;

namespace {

HexMesh unit_cubes(int n, double twist) {
    MeshConfig cfg;
    cfg.nx = cfg.ny = cfg.nz = n;
    cfg.twist_angle_max = twist;
    return build_twisted_grid(cfg);
}

// Analytic 1D tables for the order-1 hat basis on [0, 1].
constexpr double kMass1d[2][2] = {{1.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 1.0 / 3.0}};
constexpr double kGrad1d[2][2] = {{-0.5, 0.5}, {-0.5, 0.5}}; // integral of l_i * l_j'

} // namespace

TEST_CASE("basis counts per order") {
    const HexMesh mesh = unit_cubes(1, 0.0);
    CHECK(precompute_basis_integrals(mesh, 1).basis == 8);
    CHECK(precompute_basis_integrals(mesh, 2).basis == 27);
    CHECK(precompute_basis_integrals(mesh, 3).basis == 64);
}

TEST_CASE("unit cube order-1 mass matrix is the analytic tensor product") {
    const HexMesh mesh = unit_cubes(2, 0.0); // unit-spaced, untwisted
    const ElementGeometry geom = precompute_basis_integrals(mesh, 1);
    CHECK(geom.mass_at(0)[0] == doctest::Approx(1.0 / 27.0).epsilon(1e-13));
    for (int e = 0; e < mesh.elem_count(); ++e) {
        const double* m = geom.mass_at(e);
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) {
                const double expect = kMass1d[i & 1][j & 1] * kMass1d[(i >> 1) & 1][(j >> 1) & 1] *
                                      kMass1d[(i >> 2) & 1][(j >> 2) & 1];
                CHECK(std::abs(m[i * 8 + j] - expect) < 1e-12);
            }
        }
    }
}

TEST_CASE("unit cube order-1 gradient tables match the analytic tensor product") {
    const HexMesh mesh = unit_cubes(1, 0.0);
    const ElementGeometry geom = precompute_basis_integrals(mesh, 1);
    const double* gx = geom.grad_at(0, 0);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const double expect = kGrad1d[i & 1][j & 1] * kMass1d[(i >> 1) & 1][(j >> 1) & 1] *
                                  kMass1d[(i >> 2) & 1][(j >> 2) & 1];
            CHECK(std::abs(gx[i * 8 + j] - expect) < 1e-13);
        }
    }
}

TEST_CASE("gradient row sums vanish (derivative of a constant)") {
    const HexMesh mesh = unit_cubes(3, 0.5);
    for (const int order : {1, 2, 3}) {
        const ElementGeometry geom = precompute_basis_integrals(mesh, order);
        const int B = geom.basis;
        for (int e = 0; e < mesh.elem_count(); e += 7) {
            for (int axis = 0; axis < 3; ++axis) {
                const double* g = geom.grad_at(axis, e);
                for (int i = 0; i < B; ++i) {
                    double row = 0.0;
                    for (int j = 0; j < B; ++j) {
                        row += g[i * B + j];
                    }
                    CHECK(std::abs(row) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("mass matrices are symmetric positive definite") {
    const HexMesh mesh = unit_cubes(2, 0.5);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (const int order : {1, 2}) {
        const ElementGeometry geom = precompute_basis_integrals(mesh, order);
        const int B = geom.basis;
        for (int e = 0; e < mesh.elem_count(); ++e) {
            const double* m = geom.mass_at(e);
            for (int i = 0; i < B; ++i) {
                for (int j = 0; j < i; ++j) {
                    CHECK(std::abs(m[i * B + j] - m[j * B + i]) < 1e-13);
                }
            }
            for (int trial = 0; trial < 4; ++trial) {
                std::vector<double> x(B);
                for (double& v : x) {
                    v = dist(rng);
                }
                double quad_form = 0.0;
                for (int i = 0; i < B; ++i) {
                    for (int j = 0; j < B; ++j) {
                        quad_form += x[i] * m[i * B + j] * x[j];
                    }
                }
                CHECK(quad_form > 0.0);
            }
        }
    }
}

TEST_CASE("directional face tables sum to the stored area-weighted normal") {
    const HexMesh mesh = unit_cubes(3, 0.5);
    for (const int order : {1, 2}) {
        const ElementGeometry geom = precompute_basis_integrals(mesh, order);
        const int F = geom.face_basis;
        for (int e = 0; e < mesh.elem_count(); e += 5) {
            for (int f = 0; f < kFacesPerElem; ++f) {
                Vec3 total;
                for (int i = 0; i < F; ++i) {
                    for (int j = 0; j < F; ++j) {
                        total.x += geom.face_dir_at(0, e, f)[i * F + j];
                        total.y += geom.face_dir_at(1, e, f)[i * F + j];
                        total.z += geom.face_dir_at(2, e, f)[i * F + j];
                    }
                }
                CHECK(norm(total - mesh.normals[e][f]) < 1e-12);
            }
        }
    }
}

TEST_CASE("face node sets and trace maps pair coincident nodes") {
    const HexMesh mesh = unit_cubes(2, 0.5);
    for (const int order : {1, 2, 3}) {
        const ElementGeometry geom = precompute_basis_integrals(mesh, order);
        const int F = geom.face_basis;
        for (int f = 0; f < kFacesPerElem; ++f) {
            CHECK(static_cast<int>(geom.face_nodes[f].size()) == F);
        }
        for (int e = 0; e < mesh.elem_count(); ++e) {
            for (int f = 0; f < kFacesPerElem; ++f) {
                const std::int32_t nb = mesh.elem_neighbors[e][f];
                if (nb == kBoundary) {
                    continue;
                }
                const std::int32_t* trace = geom.trace_at(e, f);
                for (int k = 0; k < F; ++k) {
                    const Vec3 own =
                        mesh.map_point(e, basis_node_ref(order, geom.face_nodes[f][k]));
                    const Vec3 other = mesh.map_point(nb, basis_node_ref(order, trace[k]));
                    CHECK(norm(own - other) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("face mass of a unit square face integrates to area 1") {
    const HexMesh mesh = unit_cubes(1, 0.0);
    const ElementGeometry geom = precompute_basis_integrals(mesh, 2);
    const int F = geom.face_basis;
    for (int f = 0; f < kFacesPerElem; ++f) {
        double total = 0.0;
        for (int i = 0; i < F * F; ++i) {
            total += geom.face_mass_at(0, f)[i];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}
