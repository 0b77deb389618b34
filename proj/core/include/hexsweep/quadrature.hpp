#pragma once

#include <array>
#include <vector>

#include "hexsweep/vec3.hpp"

namespace hexsweep {

/// Discrete angle set for sweeps: A directions per octant with positive
/// weights summing to 1 over all 8*A angles. Octant o applies the sign
/// pattern octant_signs[o] to the octant-0 directions.
struct QuadratureSet {
    int per_octant = 0;                                // A
    std::vector<Vec3> octant0;                         // strictly positive cosines
    std::vector<double> weights;                       // per angle, shared by octants
    std::array<std::array<int, 3>, 8> octant_signs{};  // (+-1, +-1, +-1)

    Vec3 direction(int octant, int angle) const {
        const Vec3& d = octant0[angle];
        const auto& s = octant_signs[octant];
        return {s[0] * d.x, s[1] * d.y, s[2] * d.z};
    }
    double weight(int angle) const { return weights[angle]; }
    int total_angles() const { return 8 * per_octant; }
};

/// Product Chebyshev (azimuth) x Gauss-Legendre (polar cosine) rule with
/// sqrt(A) points per factor, restricted to one octant and mirrored.
/// A must be a perfect square; A = 1 uses the symmetry-forced diagonal.
QuadratureSet build_quadrature(int angles_per_octant);

/// Real-spherical-harmonic value for a flux moment at a unit direction.
/// Moment index l enumerates (degree, order) pairs: l=0 is isotropic,
/// l=1..3 are the linear harmonics, and so on up to degree 3 (l <= 15).
double angular_moment(int moment, const Vec3& dir);

inline constexpr int kMaxMoments = 16;

} // namespace hexsweep
