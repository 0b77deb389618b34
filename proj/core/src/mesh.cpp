#include "hexsweep/mesh.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hexsweep/errors.hpp"
#include "hexsweep/gauss.hpp"
#include "trilinear.hpp"

namespace hexsweep {

void MeshConfig::validate() const {
    if (nx < 1 || ny < 1 || nz < 1) {
        throw ConfigError("mesh: nx, ny, nz must all be >= 1");
    }
    if (fem_order < 1 || fem_order > 3) {
        throw ConfigError("mesh: fem_order must be 1, 2 or 3");
    }
}

Vec3 HexMesh::map_point(int elem, const Vec3& ref) const {
    const auto n = detail::trilinear_shapes(ref);
    Vec3 p;
    for (int c = 0; c < 8; ++c) {
        p += n[c] * node_coords[elem_nodes[elem][c]];
    }
    return p;
}

FaceOrientation face_orientation(const HexMesh& mesh, int elem, int face, const Vec3& direction) {
    const Vec3& n = mesh.normals[elem][face];
    const double d = dot(n, direction);
    const double eps = 1e-12 * norm(n);
    if (d > eps) {
        return FaceOrientation::Outflow;
    }
    if (d < -eps) {
        return FaceOrientation::Inflow;
    }
    return FaceOrientation::Tangent;
}

namespace {

Vec3 twist_node(const Vec3& p, const MeshConfig& cfg) {
    double s = 0.0, len = 1.0;
    switch (cfg.twist_axis) {
    case Axis::X: s = p.x; len = cfg.nx; break;
    case Axis::Y: s = p.y; len = cfg.ny; break;
    case Axis::Z: s = p.z; len = cfg.nz; break;
    }
    const double theta = cfg.twist_angle_max * s / len;
    const double c = std::cos(theta), sn = std::sin(theta);
    // Rotate the transverse plane about the axis centerline.
    switch (cfg.twist_axis) {
    case Axis::X: {
        const double cy = 0.5 * cfg.ny, cz = 0.5 * cfg.nz;
        const double u = p.y - cy, v = p.z - cz;
        return {p.x, cy + c * u - sn * v, cz + sn * u + c * v};
    }
    case Axis::Y: {
        const double cz = 0.5 * cfg.nz, cx = 0.5 * cfg.nx;
        const double u = p.z - cz, v = p.x - cx;
        return {cx + sn * u + c * v, p.y, cz + c * u - sn * v};
    }
    case Axis::Z:
    default: {
        const double cx = 0.5 * cfg.nx, cy = 0.5 * cfg.ny;
        const double u = p.x - cx, v = p.y - cy;
        return {cx + c * u - sn * v, cy + sn * u + c * v, p.z};
    }
    }
}

std::array<Vec3, 8> elem_corners(const HexMesh& mesh, int elem) {
    std::array<Vec3, 8> c;
    for (int i = 0; i < 8; ++i) {
        c[i] = mesh.node_coords[mesh.elem_nodes[elem][i]];
    }
    return c;
}

} // namespace

HexMesh build_twisted_grid(const MeshConfig& config) {
    config.validate();

    HexMesh mesh;
    mesh.config = config;
    const int nx = config.nx, ny = config.ny, nz = config.nz;

    mesh.node_coords.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1));
    for (int k = 0; k <= nz; ++k) {
        for (int j = 0; j <= ny; ++j) {
            for (int i = 0; i <= nx; ++i) {
                mesh.node_coords.push_back(twist_node(
                    {static_cast<double>(i), static_cast<double>(j), static_cast<double>(k)},
                    config));
            }
        }
    }

    const auto node_id = [&](int i, int j, int k) {
        return static_cast<std::int32_t>(i + (nx + 1) * (j + (ny + 1) * k));
    };

    const int ne = nx * ny * nz;
    mesh.elem_nodes.reserve(ne);
    mesh.elem_neighbors.reserve(ne);
    mesh.material.assign(ne, 0);
    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                std::array<std::int32_t, 8> corners;
                for (int c = 0; c < 8; ++c) {
                    corners[c] = node_id(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                }
                mesh.elem_nodes.push_back(corners);
                // Topology is that of the orthogonal lattice; the twist only
                // moves nodes.
                std::array<std::int32_t, 6> nbr;
                nbr[0] = (i > 0) ? mesh.elem_index(i - 1, j, k) : kBoundary;
                nbr[1] = (i < nx - 1) ? mesh.elem_index(i + 1, j, k) : kBoundary;
                nbr[2] = (j > 0) ? mesh.elem_index(i, j - 1, k) : kBoundary;
                nbr[3] = (j < ny - 1) ? mesh.elem_index(i, j + 1, k) : kBoundary;
                nbr[4] = (k > 0) ? mesh.elem_index(i, j, k - 1) : kBoundary;
                nbr[5] = (k < nz - 1) ? mesh.elem_index(i, j, k + 1) : kBoundary;
                mesh.elem_neighbors.push_back(nbr);
            }
        }
    }

    // Area-weighted face normals of the bilinear faces. The integrand
    // (r_u x r_v) is bilinear in (u, v), so a 2x2 Gauss rule is exact.
    const GaussRule face_rule = gauss_legendre_unit(2);
    mesh.normals.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const auto corners = elem_corners(mesh, e);
        for (int f = 0; f < kFacesPerElem; ++f) {
            const Vec3& p00 = corners[kFaceCorners[f][0]];
            const Vec3& p10 = corners[kFaceCorners[f][1]];
            const Vec3& p11 = corners[kFaceCorners[f][2]];
            const Vec3& p01 = corners[kFaceCorners[f][3]];
            Vec3 n;
            for (int qu = 0; qu < 2; ++qu) {
                for (int qv = 0; qv < 2; ++qv) {
                    const double u = face_rule.points[qu], v = face_rule.points[qv];
                    const double w = face_rule.weights[qu] * face_rule.weights[qv];
                    const Vec3 ru = (1.0 - v) * (p10 - p00) + v * (p11 - p01);
                    const Vec3 rv = (1.0 - u) * (p01 - p00) + u * (p11 - p10);
                    n += w * cross(ru, rv);
                }
            }
            mesh.normals[e][f] = n;
        }
    }

    // Reject twists that fold any element: detJ must stay positive at all
    // volume quadrature points of the configured FEM order.
    const GaussRule vol_rule = gauss_legendre_unit(config.fem_order + 1);
    const int nq = config.fem_order + 1;
    for (int e = 0; e < ne; ++e) {
        const auto corners = elem_corners(mesh, e);
        for (int qz = 0; qz < nq; ++qz) {
            for (int qy = 0; qy < nq; ++qy) {
                for (int qx = 0; qx < nq; ++qx) {
                    const Vec3 ref{vol_rule.points[qx], vol_rule.points[qy], vol_rule.points[qz]};
                    const double det = detail::det3(detail::trilinear_jacobian(corners, ref));
                    if (!(det > 0.0)) {
                        throw MeshError("build_twisted_grid: non-positive Jacobian determinant in "
                                        "element " + std::to_string(e) +
                                        " (detJ = " + std::to_string(det) +
                                        "); reduce twist_angle_max");
                    }
                }
            }
        }
    }

    return mesh;
}

void dump_mesh_json(const HexMesh& mesh, const std::string& path) {
    nlohmann::json j;
    auto& nodes = j["nodes"] = nlohmann::json::array();
    for (const Vec3& p : mesh.node_coords) {
        nodes.push_back({p.x, p.y, p.z});
    }
    j["elem_nodes"] = mesh.elem_nodes;
    j["elem_neighbors"] = mesh.elem_neighbors;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("dump_mesh_json: cannot open " + path);
    }
    out << j.dump(2) << "\n";
}

} // namespace hexsweep
