#include "hexsweep/geometry.hpp"

#include <cmath>
#include <string>

#include "hexsweep/errors.hpp"
#include "hexsweep/gauss.hpp"
#include "trilinear.hpp"

namespace hexsweep {

double lagrange_value(int p, int node, double x) {
    double v = 1.0;
    const double xn = static_cast<double>(node) / p;
    for (int m = 0; m <= p; ++m) {
        if (m == node) {
            continue;
        }
        const double xm = static_cast<double>(m) / p;
        v *= (x - xm) / (xn - xm);
    }
    return v;
}

double lagrange_derivative(int p, int node, double x) {
    const double xn = static_cast<double>(node) / p;
    double d = 0.0;
    for (int j = 0; j <= p; ++j) {
        if (j == node) {
            continue;
        }
        const double xj = static_cast<double>(j) / p;
        double term = 1.0 / (xn - xj);
        for (int m = 0; m <= p; ++m) {
            if (m == node || m == j) {
                continue;
            }
            const double xm = static_cast<double>(m) / p;
            term *= (x - xm) / (xn - xm);
        }
        d += term;
    }
    return d;
}

Vec3 basis_node_ref(int p, int node) {
    const int n1 = p + 1;
    const int ix = node % n1;
    const int iy = (node / n1) % n1;
    const int iz = node / (n1 * n1);
    return {static_cast<double>(ix) / p, static_cast<double>(iy) / p,
            static_cast<double>(iz) / p};
}

namespace {

double basis_value(int p, int node, const Vec3& r) {
    const int n1 = p + 1;
    return lagrange_value(p, node % n1, r.x) * lagrange_value(p, (node / n1) % n1, r.y) *
           lagrange_value(p, node / (n1 * n1), r.z);
}

Vec3 basis_gradient(int p, int node, const Vec3& r) {
    const int n1 = p + 1;
    const int ix = node % n1, iy = (node / n1) % n1, iz = node / (n1 * n1);
    const double vx = lagrange_value(p, ix, r.x);
    const double vy = lagrange_value(p, iy, r.y);
    const double vz = lagrange_value(p, iz, r.z);
    return {lagrange_derivative(p, ix, r.x) * vy * vz,
            vx * lagrange_derivative(p, iy, r.y) * vz,
            vx * vy * lagrange_derivative(p, iz, r.z)};
}

/// Bilinear interpolation of the four face corners at (u, v).
Vec3 face_point(const Vec3& p00, const Vec3& p10, const Vec3& p11, const Vec3& p01, double u,
                double v) {
    return (1.0 - u) * (1.0 - v) * p00 + u * (1.0 - v) * p10 + u * v * p11 +
           (1.0 - u) * v * p01;
}

struct ReferenceTables {
    int p, n1, basis, face_basis, vol_q, face_q;
    std::vector<double> vol_w;                   // vol_q
    std::vector<Vec3> vol_pts;                   // vol_q
    std::vector<double> vol_vals;                // vol_q * basis
    std::vector<Vec3> vol_grads;                 // vol_q * basis
    std::vector<double> face_u, face_v, face_w;  // face_q
    // Trace values of the face_nodes basis at each face quadrature point.
    std::array<std::vector<double>, kFacesPerElem> trace_vals; // face_q * face_basis
    std::array<std::vector<Vec3>, kFacesPerElem> face_node_ref; // reference coords per node
};

ReferenceTables build_reference_tables(int p,
                                       std::array<std::vector<std::int32_t>,
                                                  kFacesPerElem>& face_nodes) {
    ReferenceTables t;
    t.p = p;
    t.n1 = p + 1;
    t.basis = t.n1 * t.n1 * t.n1;
    t.face_basis = t.n1 * t.n1;
    const GaussRule rule = gauss_legendre_unit(t.n1);

    t.vol_q = t.basis;
    t.vol_w.reserve(t.vol_q);
    t.vol_pts.reserve(t.vol_q);
    for (int qz = 0; qz < t.n1; ++qz) {
        for (int qy = 0; qy < t.n1; ++qy) {
            for (int qx = 0; qx < t.n1; ++qx) {
                t.vol_pts.push_back({rule.points[qx], rule.points[qy], rule.points[qz]});
                t.vol_w.push_back(rule.weights[qx] * rule.weights[qy] * rule.weights[qz]);
            }
        }
    }
    t.vol_vals.resize(static_cast<std::size_t>(t.vol_q) * t.basis);
    t.vol_grads.resize(static_cast<std::size_t>(t.vol_q) * t.basis);
    for (int q = 0; q < t.vol_q; ++q) {
        for (int n = 0; n < t.basis; ++n) {
            t.vol_vals[static_cast<std::size_t>(q) * t.basis + n] = basis_value(p, n, t.vol_pts[q]);
            t.vol_grads[static_cast<std::size_t>(q) * t.basis + n] =
                basis_gradient(p, n, t.vol_pts[q]);
        }
    }

    t.face_q = t.face_basis;
    for (int qv = 0; qv < t.n1; ++qv) {
        for (int qu = 0; qu < t.n1; ++qu) {
            t.face_u.push_back(rule.points[qu]);
            t.face_v.push_back(rule.points[qv]);
            t.face_w.push_back(rule.weights[qu] * rule.weights[qv]);
        }
    }

    // Face nodes in (u, v) tensor order: the reference point of face node
    // (ku, kv) is the bilinear blend of the face's reference corners, which
    // lands exactly on an equispaced basis node.
    for (int f = 0; f < kFacesPerElem; ++f) {
        const Vec3 c00 = basis_node_ref(1, kFaceCorners[f][0]);
        const Vec3 c10 = basis_node_ref(1, kFaceCorners[f][1]);
        const Vec3 c11 = basis_node_ref(1, kFaceCorners[f][2]);
        const Vec3 c01 = basis_node_ref(1, kFaceCorners[f][3]);
        face_nodes[f].resize(t.face_basis);
        t.face_node_ref[f].resize(t.face_basis);
        for (int kv = 0; kv < t.n1; ++kv) {
            for (int ku = 0; ku < t.n1; ++ku) {
                const Vec3 r = face_point(c00, c10, c11, c01, static_cast<double>(ku) / p,
                                          static_cast<double>(kv) / p);
                const int ix = static_cast<int>(std::lround(r.x * p));
                const int iy = static_cast<int>(std::lround(r.y * p));
                const int iz = static_cast<int>(std::lround(r.z * p));
                face_nodes[f][ku + t.n1 * kv] =
                    static_cast<std::int32_t>(ix + t.n1 * (iy + t.n1 * iz));
                t.face_node_ref[f][ku + t.n1 * kv] = r;
            }
        }
        t.trace_vals[f].resize(static_cast<std::size_t>(t.face_q) * t.face_basis);
        for (int q = 0; q < t.face_q; ++q) {
            const Vec3 r =
                face_point(c00, c10, c11, c01, t.face_u[q], t.face_v[q]);
            for (int k = 0; k < t.face_basis; ++k) {
                t.trace_vals[f][static_cast<std::size_t>(q) * t.face_basis + k] =
                    basis_value(p, face_nodes[f][k], r);
            }
        }
    }
    return t;
}

} // namespace

ElementGeometry precompute_basis_integrals(const HexMesh& mesh, int order) {
    if (order < 1 || order > 3) {
        throw ConfigError("precompute_basis_integrals: order must be 1, 2 or 3");
    }
    ElementGeometry geom;
    geom.order = order;
    geom.basis = (order + 1) * (order + 1) * (order + 1);
    geom.face_basis = (order + 1) * (order + 1);
    geom.elements = mesh.elem_count();

    ReferenceTables ref = build_reference_tables(order, geom.face_nodes);

    const int ne = geom.elements;
    const int B = geom.basis;
    const int F = geom.face_basis;
    geom.mass.assign(static_cast<std::size_t>(ne) * B * B, 0.0);
    geom.grad_x.assign(geom.mass.size(), 0.0);
    geom.grad_y.assign(geom.mass.size(), 0.0);
    geom.grad_z.assign(geom.mass.size(), 0.0);
    geom.face_mass.assign(static_cast<std::size_t>(ne) * kFacesPerElem * F * F, 0.0);
    geom.face_x.assign(geom.face_mass.size(), 0.0);
    geom.face_y.assign(geom.face_mass.size(), 0.0);
    geom.face_z.assign(geom.face_mass.size(), 0.0);
    geom.trace_map.assign(static_cast<std::size_t>(ne) * kFacesPerElem * F, kBoundary);

    std::vector<Vec3> phys_grad(B);
    for (int e = 0; e < ne; ++e) {
        std::array<Vec3, 8> corners;
        for (int c = 0; c < 8; ++c) {
            corners[c] = mesh.node_coords[mesh.elem_nodes[e][c]];
        }

        double* m = &geom.mass[geom.vol_off(e)];
        double* gx = &geom.grad_x[geom.vol_off(e)];
        double* gy = &geom.grad_y[geom.vol_off(e)];
        double* gz = &geom.grad_z[geom.vol_off(e)];
        for (int q = 0; q < ref.vol_q; ++q) {
            const auto jac = detail::trilinear_jacobian(corners, ref.vol_pts[q]);
            const double det = detail::det3(jac);
            if (!(det > 0.0)) {
                throw MeshError("precompute_basis_integrals: non-positive Jacobian in element " +
                                std::to_string(e));
            }
            // Cofactor columns: detJ * J^{-T}. Multiplying the reference
            // gradient by these absorbs the detJ weight of the integrand.
            const Vec3 c0 = cross(jac[1], jac[2]);
            const Vec3 c1 = cross(jac[2], jac[0]);
            const Vec3 c2 = cross(jac[0], jac[1]);
            const double* bv = &ref.vol_vals[static_cast<std::size_t>(q) * B];
            const Vec3* bg = &ref.vol_grads[static_cast<std::size_t>(q) * B];
            for (int j = 0; j < B; ++j) {
                phys_grad[j] = bg[j].x * c0 + bg[j].y * c1 + bg[j].z * c2;
            }
            const double w = ref.vol_w[q];
            const double wdet = w * det;
            for (int i = 0; i < B; ++i) {
                const double wi = w * bv[i];
                const double wdi = wdet * bv[i];
                double* mrow = m + static_cast<std::size_t>(i) * B;
                double* gxrow = gx + static_cast<std::size_t>(i) * B;
                double* gyrow = gy + static_cast<std::size_t>(i) * B;
                double* gzrow = gz + static_cast<std::size_t>(i) * B;
                for (int j = 0; j < B; ++j) {
                    mrow[j] += wdi * bv[j];
                    gxrow[j] += wi * phys_grad[j].x;
                    gyrow[j] += wi * phys_grad[j].y;
                    gzrow[j] += wi * phys_grad[j].z;
                }
            }
        }

        for (int f = 0; f < kFacesPerElem; ++f) {
            const Vec3& p00 = corners[kFaceCorners[f][0]];
            const Vec3& p10 = corners[kFaceCorners[f][1]];
            const Vec3& p11 = corners[kFaceCorners[f][2]];
            const Vec3& p01 = corners[kFaceCorners[f][3]];
            double* fm = &geom.face_mass[geom.face_off(e, f)];
            double* fx = &geom.face_x[geom.face_off(e, f)];
            double* fy = &geom.face_y[geom.face_off(e, f)];
            double* fz = &geom.face_z[geom.face_off(e, f)];
            for (int q = 0; q < ref.face_q; ++q) {
                const double u = ref.face_u[q], v = ref.face_v[q];
                const Vec3 ru = (1.0 - v) * (p10 - p00) + v * (p11 - p01);
                const Vec3 rv = (1.0 - u) * (p01 - p00) + u * (p11 - p10);
                const Vec3 n = cross(ru, rv);
                const double area = norm(n);
                const double w = ref.face_w[q];
                const double* tv = &ref.trace_vals[f][static_cast<std::size_t>(q) * F];
                for (int i = 0; i < F; ++i) {
                    const double wi = w * tv[i];
                    for (int j = 0; j < F; ++j) {
                        const double ww = wi * tv[j];
                        fm[i * F + j] += ww * area;
                        fx[i * F + j] += ww * n.x;
                        fy[i * F + j] += ww * n.y;
                        fz[i * F + j] += ww * n.z;
                    }
                }
            }
        }
    }

    // Trace map: match our face nodes to the neighbor's coincident basis
    // nodes geometrically. Shared faces are the same bilinear surface seen
    // from both sides, so the positions agree to roundoff.
    for (int e = 0; e < ne; ++e) {
        for (int f = 0; f < kFacesPerElem; ++f) {
            const std::int32_t nb = mesh.elem_neighbors[e][f];
            if (nb == kBoundary) {
                continue;
            }
            const int fo = opposite_face(f);
            std::int32_t* tmap =
                &geom.trace_map[(static_cast<std::size_t>(e) * kFacesPerElem + f) * F];
            for (int k = 0; k < F; ++k) {
                const Vec3 own = mesh.map_point(e, ref.face_node_ref[f][k]);
                double best = 1e30;
                std::int32_t best_node = kBoundary;
                for (int kk = 0; kk < F; ++kk) {
                    const Vec3 other = mesh.map_point(nb, ref.face_node_ref[fo][kk]);
                    const double d2 = dot(own - other, own - other);
                    if (d2 < best) {
                        best = d2;
                        best_node = geom.face_nodes[fo][kk];
                    }
                }
                if (best > 1e-12) {
                    throw MeshError("precompute_basis_integrals: no coincident trace node across "
                                    "face " + std::to_string(f) + " of element " +
                                    std::to_string(e));
                }
                tmap[k] = best_node;
            }
        }
    }

    return geom;
}

} // namespace hexsweep
