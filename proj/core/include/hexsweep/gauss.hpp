#pragma once

#include <vector>

namespace hexsweep {

/// Gauss-Legendre rule of n points mapped to [0, 1]; weights sum to 1.
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;
};

GaussRule gauss_legendre_unit(int n);

} // namespace hexsweep
