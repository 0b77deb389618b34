#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hexsweep/quadrature.hpp"

namespace hexsweep {

struct ProblemShape {
    int angles = 1;   // per octant
    int groups = 1;
    int moments = 1;
    int elements = 0;
    int basis = 0;
};

/// The unknowns and sources of the discrete transport iteration. All arrays
/// are flat with the node index fastest. psi writes are exclusive per
/// (octant, angle, group, element) by scheduler construction; phi and the
/// moments need atomic accumulation whenever several angles are in flight.
class FluxState {
public:
    FluxState(const ProblemShape& shape, const QuadratureSet& quad);

    ProblemShape shape;
    std::vector<double> psi;          // (octant, angle, group, elem, node)
    std::vector<double> phi;          // (group, elem, node)
    std::vector<double> phi_m;        // (moment, group, elem, node)
    std::vector<double> outer_source; // (moment, group, elem, node)
    std::vector<double> inner_source; // (moment, group, elem, node)
    std::vector<double> ec;           // (octant, angle, moment)

    std::size_t psi_off(int octant, int angle, int group, int elem) const {
        return ((static_cast<std::size_t>(octant) * shape.angles + angle) * shape.groups + group) *
                   node_count() +
               static_cast<std::size_t>(elem) * shape.basis;
    }
    std::size_t node_off(int group, int elem) const {
        return static_cast<std::size_t>(group) * node_count() +
               static_cast<std::size_t>(elem) * shape.basis;
    }
    std::size_t moment_off(int moment, int group, int elem) const {
        return (static_cast<std::size_t>(moment) * shape.groups + group) * node_count() +
               static_cast<std::size_t>(elem) * shape.basis;
    }
    std::size_t node_count() const {
        return static_cast<std::size_t>(shape.elements) * shape.basis;
    }

    std::span<double> psi_at(int octant, int angle, int group, int elem) {
        return {psi.data() + psi_off(octant, angle, group, elem),
                static_cast<std::size_t>(shape.basis)};
    }
    std::span<const double> psi_at(int octant, int angle, int group, int elem) const {
        return {psi.data() + psi_off(octant, angle, group, elem),
                static_cast<std::size_t>(shape.basis)};
    }

    double ec_at(int moment, int angle, int octant) const {
        return ec[(static_cast<std::size_t>(octant) * shape.angles + angle) * shape.moments +
                  moment];
    }

    /// Zero phi and the flux moments (between source updates and sweeps).
    void zero_flux();
};

/// Synthetic material data: total and scattering cross sections plus the
/// fixed external source, stored per basis node.
class CrossSectionTable {
public:
    int materials = 1;
    int groups = 1;
    int moments = 1;

    std::vector<double> sigt; // (material, group), > 0
    std::vector<double> sigs; // (material, moment, group_from, group_to), >= 0
    std::vector<double> qex;  // (moment, group, elem, node)

    double sigt_at(int material, int group) const {
        return sigt[static_cast<std::size_t>(material) * groups + group];
    }
    double sigs_at(int material, int moment, int from, int to) const {
        return sigs[((static_cast<std::size_t>(material) * moments + moment) * groups + from) *
                        groups +
                    to];
    }

    /// Removal must dominate within-problem scattering for the iteration to
    /// be stable. Throws ConfigError on violation.
    void validate() const;

    static CrossSectionTable synthetic(const ProblemShape& shape, bool sigs_zero);
};

} // namespace hexsweep
