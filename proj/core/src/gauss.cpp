#include "hexsweep/gauss.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hexsweep {

// Roots of the Legendre polynomial P_n on [-1, 1] by Newton iteration from
// the Chebyshev initial guess, then mapped to [0, 1].
GaussRule gauss_legendre_unit(int n) {
    if (n < 1) {
        throw std::invalid_argument("gauss_legendre_unit: n must be >= 1");
    }
    GaussRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Newton converges from the top; store ascending on [0, 1].
        rule.points[n - 1 - i] = 0.5 * (x + 1.0);
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

} // namespace hexsweep
