#include "hexsweep/flux.hpp"

#include <algorithm>

#include "hexsweep/errors.hpp"

namespace hexsweep {

FluxState::FluxState(const ProblemShape& s, const QuadratureSet& quad) : shape(s) {
    const std::size_t nodes = node_count();
    psi.assign(8 * static_cast<std::size_t>(shape.angles) * shape.groups * nodes, 0.0);
    phi.assign(static_cast<std::size_t>(shape.groups) * nodes, 0.0);
    phi_m.assign(static_cast<std::size_t>(shape.moments) * shape.groups * nodes, 0.0);
    outer_source.assign(phi_m.size(), 0.0);
    inner_source.assign(phi_m.size(), 0.0);

    ec.resize(8 * static_cast<std::size_t>(shape.angles) * shape.moments);
    for (int o = 0; o < 8; ++o) {
        for (int a = 0; a < shape.angles; ++a) {
            const Vec3 dir = quad.direction(o, a);
            for (int l = 0; l < shape.moments; ++l) {
                ec[(static_cast<std::size_t>(o) * shape.angles + a) * shape.moments + l] =
                    angular_moment(l, dir);
            }
        }
    }
}

void FluxState::zero_flux() {
    std::fill(phi.begin(), phi.end(), 0.0);
    std::fill(phi_m.begin(), phi_m.end(), 0.0);
}

void CrossSectionTable::validate() const {
    for (int m = 0; m < materials; ++m) {
        for (int g = 0; g < groups; ++g) {
            if (!(sigt_at(m, g) > 0.0)) {
                throw ConfigError("cross sections: sigt must be positive");
            }
            double out = 0.0;
            for (int gt = 0; gt < groups; ++gt) {
                const double s = sigs_at(m, 0, g, gt);
                if (s < 0.0) {
                    throw ConfigError("cross sections: sigs must be non-negative");
                }
                out += s;
            }
            if (!(out < sigt_at(m, g))) {
                throw ConfigError("cross sections: scattering must be dominated by removal");
            }
        }
    }
}

CrossSectionTable CrossSectionTable::synthetic(const ProblemShape& shape, bool sigs_zero) {
    CrossSectionTable xs;
    xs.materials = 1;
    xs.groups = shape.groups;
    xs.moments = shape.moments;

    xs.sigt.resize(shape.groups);
    for (int g = 0; g < shape.groups; ++g) {
        xs.sigt[g] = 1.0 + 0.01 * g;
    }
    xs.sigs.assign(static_cast<std::size_t>(shape.moments) * shape.groups * shape.groups, 0.0);
    if (!sigs_zero) {
        const double s = 0.05 / shape.groups;
        for (int gf = 0; gf < shape.groups; ++gf) {
            for (int gt = 0; gt < shape.groups; ++gt) {
                xs.sigs[(static_cast<std::size_t>(0) * shape.groups + gf) * shape.groups + gt] = s;
            }
        }
    }
    // Flat isotropic external source on every node.
    const std::size_t nodes = static_cast<std::size_t>(shape.elements) * shape.basis;
    xs.qex.assign(static_cast<std::size_t>(shape.moments) * shape.groups * nodes, 0.0);
    for (int g = 0; g < shape.groups; ++g) {
        std::fill_n(xs.qex.begin() + static_cast<std::size_t>(g) * nodes, nodes, 1.0);
    }
    return xs;
}

} // namespace hexsweep
