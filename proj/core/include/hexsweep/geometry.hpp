#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hexsweep/mesh.hpp"

namespace hexsweep {

/// Precomputed per-element FEM integral tables for a tensor-product Lagrange
/// basis of order p on (p+1)^3 equispaced reference nodes. Volume integrals
/// use (p+1)^3 Gauss-Legendre points through the trilinear geometry map;
/// face integrals use (p+1)^2 points on the bilinear face with the pointwise
/// surface normal, split into the three directional tables so the upwind
/// flux for a direction (mu, eta, xi) is mu*face_x + eta*face_y + xi*face_z.
class ElementGeometry {
public:
    int order = 0;      // p
    int basis = 0;      // B = (p+1)^3
    int face_basis = 0; // F = (p+1)^2
    int elements = 0;

    // Dense B x B volume tables per element, row-major: entry (i, j).
    std::vector<double> mass;   // integral of f_i f_j detJ
    std::vector<double> grad_x; // integral of f_i df_j/dx detJ
    std::vector<double> grad_y;
    std::vector<double> grad_z;

    // Compact F x F face tables per (element, face) over the face trace
    // nodes; expand through face_nodes to basis indices.
    std::vector<double> face_mass; // integral of f_i f_j dS
    std::vector<double> face_x;    // integral of n_x(u,v) f_i f_j du dv
    std::vector<double> face_y;
    std::vector<double> face_z;

    // Basis indices with nonzero trace on each local face, in face (u, v)
    // tensor order. Identical for every element.
    std::array<std::vector<std::int32_t>, kFacesPerElem> face_nodes;

    // For face node k of (elem, face): the basis index in the neighbor
    // element holding the coincident node. kBoundary entries on the hull.
    std::vector<std::int32_t> trace_map;

    const double* mass_at(int elem) const { return &mass[vol_off(elem)]; }
    const double* grad_at(int axis, int elem) const {
        const auto& g = axis == 0 ? grad_x : axis == 1 ? grad_y : grad_z;
        return &g[vol_off(elem)];
    }
    const double* face_mass_at(int elem, int face) const {
        return &face_mass[face_off(elem, face)];
    }
    const double* face_dir_at(int axis, int elem, int face) const {
        const auto& g = axis == 0 ? face_x : axis == 1 ? face_y : face_z;
        return &g[face_off(elem, face)];
    }
    const std::int32_t* trace_at(int elem, int face) const {
        return &trace_map[(static_cast<std::size_t>(elem) * kFacesPerElem + face) * face_basis];
    }

    std::size_t vol_off(int elem) const {
        return static_cast<std::size_t>(elem) * basis * basis;
    }
    std::size_t face_off(int elem, int face) const {
        return (static_cast<std::size_t>(elem) * kFacesPerElem + face) * face_basis * face_basis;
    }
};

ElementGeometry precompute_basis_integrals(const HexMesh& mesh, int order);

/// 1D Lagrange basis on p+1 equispaced nodes over [0, 1].
double lagrange_value(int p, int node, double x);
double lagrange_derivative(int p, int node, double x);

/// Reference coordinates of basis node n (tensor index, x fastest).
Vec3 basis_node_ref(int p, int node);

} // namespace hexsweep
