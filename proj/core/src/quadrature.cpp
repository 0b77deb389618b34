#include "hexsweep/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "hexsweep/errors.hpp"
#include "hexsweep/gauss.hpp"

namespace hexsweep {

QuadratureSet build_quadrature(int angles_per_octant) {
    if (angles_per_octant < 1) {
        throw ConfigError("quadrature: angles_per_octant must be >= 1");
    }
    QuadratureSet q;
    q.per_octant = angles_per_octant;
    for (int o = 0; o < 8; ++o) {
        q.octant_signs[o] = {(o & 1) ? -1 : 1, (o & 2) ? -1 : 1, (o & 4) ? -1 : 1};
    }

    if (angles_per_octant == 1) {
        // One angle per octant is forced onto the diagonal by symmetry.
        const double r = 1.0 / std::sqrt(3.0);
        q.octant0 = {{r, r, r}};
        q.weights = {1.0 / 8.0};
        return q;
    }

    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(angles_per_octant))));
    if (n * n != angles_per_octant) {
        throw ConfigError("quadrature: angles_per_octant must be a perfect square "
                          "(product rule), got " + std::to_string(angles_per_octant));
    }

    // Polar cosine xi from Gauss-Legendre on (0, 1); azimuth at Chebyshev
    // (midpoint) angles on (0, pi/2) with equal weights.
    const GaussRule polar = gauss_legendre_unit(n);
    q.octant0.reserve(angles_per_octant);
    q.weights.reserve(angles_per_octant);
    for (int ip = 0; ip < n; ++ip) {
        const double xi = polar.points[ip];
        const double sin_theta = std::sqrt(1.0 - xi * xi);
        for (int ia = 0; ia < n; ++ia) {
            const double phi = (ia + 0.5) * (std::numbers::pi / 2.0) / n;
            q.octant0.push_back({sin_theta * std::cos(phi), sin_theta * std::sin(phi), xi});
            q.weights.push_back(polar.weights[ip] / n / 8.0);
        }
    }
    return q;
}

double angular_moment(int moment, const Vec3& dir) {
    const double x = dir.x, y = dir.y, z = dir.z;
    switch (moment) {
    case 0: return 1.0;
    // degree 1
    case 1: return y;
    case 2: return z;
    case 3: return x;
    // degree 2
    case 4: return std::sqrt(3.0) * x * y;
    case 5: return std::sqrt(3.0) * y * z;
    case 6: return 0.5 * (3.0 * z * z - 1.0);
    case 7: return std::sqrt(3.0) * x * z;
    case 8: return 0.5 * std::sqrt(3.0) * (x * x - y * y);
    // degree 3
    case 9: return std::sqrt(5.0 / 8.0) * y * (3.0 * x * x - y * y);
    case 10: return std::sqrt(15.0) * x * y * z;
    case 11: return std::sqrt(3.0 / 8.0) * y * (5.0 * z * z - 1.0);
    case 12: return 0.5 * z * (5.0 * z * z - 3.0);
    case 13: return std::sqrt(3.0 / 8.0) * x * (5.0 * z * z - 1.0);
    case 14: return 0.5 * std::sqrt(15.0) * z * (x * x - y * y);
    case 15: return std::sqrt(5.0 / 8.0) * x * (x * x - 3.0 * y * y);
    default:
        throw ConfigError("angular_moment: moment index " + std::to_string(moment) +
                          " out of range (max " + std::to_string(kMaxMoments - 1) + ")");
    }
}

} // namespace hexsweep
