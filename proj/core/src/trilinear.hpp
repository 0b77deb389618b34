#pragma once

// Internal helpers for the trilinear corner-node geometry map on the
// reference cube [0,1]^3. Corner (di,dj,dk) has local id di + 2*dj + 4*dk.

#include <array>

#include "hexsweep/vec3.hpp"

namespace hexsweep::detail {

inline std::array<double, 8> trilinear_shapes(const Vec3& r) {
    const double wx[2] = {1.0 - r.x, r.x};
    const double wy[2] = {1.0 - r.y, r.y};
    const double wz[2] = {1.0 - r.z, r.z};
    std::array<double, 8> n{};
    for (int c = 0; c < 8; ++c) {
        n[c] = wx[c & 1] * wy[(c >> 1) & 1] * wz[(c >> 2) & 1];
    }
    return n;
}

inline std::array<Vec3, 8> trilinear_gradients(const Vec3& r) {
    const double wx[2] = {1.0 - r.x, r.x};
    const double wy[2] = {1.0 - r.y, r.y};
    const double wz[2] = {1.0 - r.z, r.z};
    const double dx[2] = {-1.0, 1.0};
    std::array<Vec3, 8> g{};
    for (int c = 0; c < 8; ++c) {
        const int i = c & 1, j = (c >> 1) & 1, k = (c >> 2) & 1;
        g[c] = {dx[i] * wy[j] * wz[k], wx[i] * dx[j] * wz[k], wx[i] * wy[j] * dx[k]};
    }
    return g;
}

/// Jacobian columns d(map)/d(ref axis) from the 8 physical corners.
inline std::array<Vec3, 3> trilinear_jacobian(const std::array<Vec3, 8>& corners, const Vec3& r) {
    const auto g = trilinear_gradients(r);
    std::array<Vec3, 3> jac{};
    for (int c = 0; c < 8; ++c) {
        jac[0] += g[c].x * corners[c];
        jac[1] += g[c].y * corners[c];
        jac[2] += g[c].z * corners[c];
    }
    return jac;
}

inline double det3(const std::array<Vec3, 3>& j) {
    return dot(j[0], cross(j[1], j[2]));
}

} // namespace hexsweep::detail
