#include "hexsweep/kernel.hpp"

#include <atomic>
#include <cmath>
#include <cstring>

#include "hexsweep/errors.hpp"

namespace hexsweep {

void solve_dense(DenseSystem& system, std::vector<int>& pivot_scratch) {
    const int n = system.n;
    double* a = system.a.data();
    double* b = system.b.data();
    pivot_scratch.resize(n);

    double norm_a = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            row += std::abs(a[static_cast<std::size_t>(i) * n + j]);
        }
        norm_a = std::max(norm_a, row);
    }

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a[static_cast<std::size_t>(k) * n + k]);
        for (int r = k + 1; r < n; ++r) {
            const double v = std::abs(a[static_cast<std::size_t>(r) * n + k]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < 1e-14 * norm_a) {
            throw SingularSystemError("solve_dense: pivot " + std::to_string(best) +
                                      " below threshold at column " + std::to_string(k));
        }
        if (piv != k) {
            for (int j = k; j < n; ++j) {
                std::swap(a[static_cast<std::size_t>(k) * n + j],
                          a[static_cast<std::size_t>(piv) * n + j]);
            }
            std::swap(b[k], b[piv]);
        }
        const double inv = 1.0 / a[static_cast<std::size_t>(k) * n + k];
        for (int r = k + 1; r < n; ++r) {
            const double factor = a[static_cast<std::size_t>(r) * n + k] * inv;
            if (factor == 0.0) {
                continue;
            }
            a[static_cast<std::size_t>(r) * n + k] = 0.0;
            for (int j = k + 1; j < n; ++j) {
                a[static_cast<std::size_t>(r) * n + j] -=
                    factor * a[static_cast<std::size_t>(k) * n + j];
            }
            b[r] -= factor * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j < n; ++j) {
            acc -= a[static_cast<std::size_t>(i) * n + j] * b[j];
        }
        b[i] = acc / a[static_cast<std::size_t>(i) * n + i];
    }
}

void solve_dense(DenseSystem& system) {
    std::vector<int> scratch;
    solve_dense(system, scratch);
}

ElementSolver::ElementSolver(const HexMesh& mesh, const ElementGeometry& geom,
                             const QuadratureSet& quad, const CrossSectionTable& xs,
                             FluxState& state)
    : mesh_(mesh), geom_(geom), quad_(quad), xs_(xs), state_(state) {
    sys_.resize(geom.basis);
    source_node_.resize(geom.basis);
}

void ElementSolver::assemble(int octant, int angle, int group, int elem, DenseSystem& out,
                             double boundary_inflow) const {
    const int B = geom_.basis;
    const int F = geom_.face_basis;
    out.resize(B);
    double* a = out.a.data();
    double* b = out.b.data();

    const Vec3 omega = quad_.direction(octant, angle);
    const double sigt = xs_.sigt_at(mesh_.material[elem], group);
    const double* m = geom_.mass_at(elem);
    const double* gx = geom_.grad_at(0, elem);
    const double* gy = geom_.grad_at(1, elem);
    const double* gz = geom_.grad_at(2, elem);

    // Streaming integrated by parts once: -(Omega . grad f_i, psi) shows up
    // as the transposed gradient tables.
    for (int i = 0; i < B; ++i) {
        for (int j = 0; j < B; ++j) {
            const std::size_t ij = static_cast<std::size_t>(i) * B + j;
            const std::size_t ji = static_cast<std::size_t>(j) * B + i;
            a[ij] = sigt * m[ij] - (omega.x * gx[ji] + omega.y * gy[ji] + omega.z * gz[ji]);
        }
    }

    // Volume source: mass applied to the moment-expanded nodal source.
    for (int j = 0; j < B; ++j) {
        double s = 0.0;
        for (int l = 0; l < state_.shape.moments; ++l) {
            s += state_.ec_at(l, angle, octant) *
                 state_.inner_source[state_.moment_off(l, group, elem) + j];
        }
        source_node_[j] = s;
    }
    for (int i = 0; i < B; ++i) {
        double acc = 0.0;
        const double* mrow = m + static_cast<std::size_t>(i) * B;
        for (int j = 0; j < B; ++j) {
            acc += mrow[j] * source_node_[j];
        }
        b[i] = acc;
    }

    for (int f = 0; f < kFacesPerElem; ++f) {
        const FaceOrientation orient = face_orientation(mesh_, elem, f, omega);
        if (orient == FaceOrientation::Tangent) {
            continue;
        }
        const double* fx = geom_.face_dir_at(0, elem, f);
        const double* fy = geom_.face_dir_at(1, elem, f);
        const double* fz = geom_.face_dir_at(2, elem, f);
        const std::int32_t* fn = geom_.face_nodes[f].data();
        if (orient == FaceOrientation::Outflow) {
            for (int i = 0; i < F; ++i) {
                double* arow = a + static_cast<std::size_t>(fn[i]) * B;
                for (int j = 0; j < F; ++j) {
                    const std::size_t ij = static_cast<std::size_t>(i) * F + j;
                    arow[fn[j]] += omega.x * fx[ij] + omega.y * fy[ij] + omega.z * fz[ij];
                }
            }
        } else {
            const std::int32_t nb = mesh_.elem_neighbors[elem][f];
            const double* psi_up = nullptr;
            const std::int32_t* trace = nullptr;
            if (nb != kBoundary) {
                psi_up = state_.psi.data() + state_.psi_off(octant, angle, group, nb);
                trace = geom_.trace_at(elem, f);
            } else if (boundary_inflow == 0.0) {
                continue; // vacuum
            }
            for (int i = 0; i < F; ++i) {
                double acc = 0.0;
                for (int j = 0; j < F; ++j) {
                    const std::size_t ij = static_cast<std::size_t>(i) * F + j;
                    const double up = psi_up ? psi_up[trace[j]] : boundary_inflow;
                    acc += (omega.x * fx[ij] + omega.y * fy[ij] + omega.z * fz[ij]) * up;
                }
                b[fn[i]] -= acc; // n.Omega < 0 here, so this adds inflow
            }
        }
    }
}

std::span<const double> ElementSolver::solve(int octant, int angle, int group, int elem) {
    assemble(octant, angle, group, elem, sys_);
    solve_dense(sys_, piv_);
    double* out = state_.psi.data() + state_.psi_off(octant, angle, group, elem);
    std::memcpy(out, sys_.b.data(), sizeof(double) * geom_.basis);
    return {out, static_cast<std::size_t>(geom_.basis)};
}

void accumulate_flux(FluxState& state, const QuadratureSet& quad, int octant, int angle,
                     int group, int elem, std::span<const double> psi, AccumMode mode) {
    const int B = state.shape.basis;
    const double w = quad.weight(angle);
    double* phi = state.phi.data() + state.node_off(group, elem);
    if (mode == AccumMode::Exclusive) {
        for (int n = 0; n < B; ++n) {
            phi[n] += w * psi[n];
        }
        for (int l = 0; l < state.shape.moments; ++l) {
            const double c = state.ec_at(l, angle, octant) * w;
            double* pm = state.phi_m.data() + state.moment_off(l, group, elem);
            for (int n = 0; n < B; ++n) {
                pm[n] += c * psi[n];
            }
        }
    } else {
        for (int n = 0; n < B; ++n) {
            std::atomic_ref<double>(phi[n]).fetch_add(w * psi[n], std::memory_order_relaxed);
        }
        for (int l = 0; l < state.shape.moments; ++l) {
            const double c = state.ec_at(l, angle, octant) * w;
            double* pm = state.phi_m.data() + state.moment_off(l, group, elem);
            for (int n = 0; n < B; ++n) {
                std::atomic_ref<double>(pm[n]).fetch_add(c * psi[n], std::memory_order_relaxed);
            }
        }
    }
}

void update_outer_source(FluxState& state, const CrossSectionTable& xs, const HexMesh& mesh) {
    const int B = state.shape.basis;
    const int G = state.shape.groups;
    for (int l = 0; l < state.shape.moments; ++l) {
        for (int gt = 0; gt < G; ++gt) {
            for (int e = 0; e < state.shape.elements; ++e) {
                const int mat = mesh.material[e];
                double* out = state.outer_source.data() + state.moment_off(l, gt, e);
                const double* q = xs.qex.data() + state.moment_off(l, gt, e);
                for (int n = 0; n < B; ++n) {
                    out[n] = q[n];
                }
                for (int gf = 0; gf < G; ++gf) {
                    if (gf == gt) {
                        continue;
                    }
                    const double c = xs.sigs_at(mat, l, gf, gt);
                    if (c == 0.0) {
                        continue;
                    }
                    const double* pm = state.phi_m.data() + state.moment_off(l, gf, e);
                    for (int n = 0; n < B; ++n) {
                        out[n] += c * pm[n];
                    }
                }
            }
        }
    }
    state.zero_flux();
}

void update_inner_source(FluxState& state, const CrossSectionTable& xs, const HexMesh& mesh) {
    const int B = state.shape.basis;
    for (int l = 0; l < state.shape.moments; ++l) {
        for (int g = 0; g < state.shape.groups; ++g) {
            for (int e = 0; e < state.shape.elements; ++e) {
                const double c = xs.sigs_at(mesh.material[e], l, g, g);
                const std::size_t off = state.moment_off(l, g, e);
                double* src = state.inner_source.data() + off;
                const double* outer = state.outer_source.data() + off;
                const double* pm = state.phi_m.data() + off;
                for (int n = 0; n < B; ++n) {
                    src[n] = outer[n] + c * pm[n];
                }
            }
        }
    }
    state.zero_flux();
}

std::vector<double> integrated_flux(const FluxState& state) {
    std::vector<double> result(state.shape.groups, 0.0);
    const std::size_t nodes = state.node_count();
    for (int g = 0; g < state.shape.groups; ++g) {
        double acc = 0.0;
        const double* phi = state.phi.data() + static_cast<std::size_t>(g) * nodes;
        for (std::size_t n = 0; n < nodes; ++n) {
            acc += phi[n];
        }
        result[g] = acc;
    }
    return result;
}

double total_integrated_flux(const FluxState& state) {
    double total = 0.0;
    for (const double v : integrated_flux(state)) {
        total += v;
    }
    return total;
}

} // namespace hexsweep
