#pragma once

#include <span>
#include <vector>

#include "hexsweep/flux.hpp"
#include "hexsweep/geometry.hpp"
#include "hexsweep/mesh.hpp"
#include "hexsweep/quadrature.hpp"

namespace hexsweep {

struct DenseSystem {
    int n = 0;
    std::vector<double> a; // row-major n*n
    std::vector<double> b;

    void resize(int size) {
        n = size;
        a.assign(static_cast<std::size_t>(size) * size, 0.0);
        b.assign(size, 0.0);
    }
};

/// In-place Gaussian elimination with partial pivoting; the solution
/// replaces b. Throws SingularSystemError if a pivot falls below
/// 1e-14 * |A|_inf.
void solve_dense(DenseSystem& system, std::vector<int>& pivot_scratch);
void solve_dense(DenseSystem& system);

enum class AccumMode { Exclusive, Atomic };

/// Per-worker assemble/solve scratch for the upwind DG transport operator.
/// Safe to use concurrently from several workers as long as no two solve
/// the same (octant, angle, group, element).
class ElementSolver {
public:
    ElementSolver(const HexMesh& mesh, const ElementGeometry& geom, const QuadratureSet& quad,
                  const CrossSectionTable& xs, FluxState& state);

    /// Build A psi = b for one (element, angle, group): streaming integrated
    /// by parts once, upwind face flux split on the sign of n.Omega, inflow
    /// traces taken from the neighbor's coincident nodes. Hull inflow faces
    /// carry the prescribed nodal value (vacuum by default).
    void assemble(int octant, int angle, int group, int elem, DenseSystem& out,
                  double boundary_inflow = 0.0) const;

    /// assemble + solve_dense + store the nodal flux into the state.
    std::span<const double> solve(int octant, int angle, int group, int elem);

private:
    const HexMesh& mesh_;
    const ElementGeometry& geom_;
    const QuadratureSet& quad_;
    const CrossSectionTable& xs_;
    FluxState& state_;
    DenseSystem sys_;
    std::vector<int> piv_;
    mutable std::vector<double> source_node_;
};

/// phi(g,e,.) += w_n psi; phi_l(l,g,e,.) += ec(l,angle,octant) w_n psi.
/// Atomic mode performs each addition as an atomic read-modify-write.
void accumulate_flux(FluxState& state, const QuadratureSet& quad, int octant, int angle,
                     int group, int elem, std::span<const double> psi, AccumMode mode);

/// Cross-group source refresh from the latest moments, then zero the flux
/// accumulators for the next pass.
void update_outer_source(FluxState& state, const CrossSectionTable& xs,
                         const HexMesh& mesh);

/// Within-group source refresh on top of the frozen outer source, then zero
/// the flux accumulators for the next sweep.
void update_inner_source(FluxState& state, const CrossSectionTable& xs,
                         const HexMesh& mesh);

/// Scalar flux summed over all spatial degrees of freedom, per group, in
/// fixed (group, element, node) order.
std::vector<double> integrated_flux(const FluxState& state);
double total_integrated_flux(const FluxState& state);

} // namespace hexsweep
