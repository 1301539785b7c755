// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/field_gen.hpp"

#include <cmath>
#include <stdexcept>

#include "snse/spectral_ops.hpp"

namespace snse {

namespace {

inline bool canonical_mode(int k1, int k2, int k3) {
    if (k3 != 0) return k3 > 0;
    if (k2 != 0) return k2 > 0;
    return k1 > 0;  // k = 0 excluded (average-free)
}

inline int inf_norm(int k1, int k2, int k3) {
    return std::max({std::abs(k1), std::abs(k2), std::abs(k3)});
}

}  // namespace

VectorField make_shear(GridSpec grid, double amplitude) {
    VectorField u(grid);
    u.at(0, 0, 0, 1)  = Complex{amplitude / 2.0, 0.0};
    u.at(0, 0, 0, -1) = Complex{amplitude / 2.0, 0.0};
    return u;
}

VectorField random_field(GridSpec grid, const CounterRng& rng, int kmax_inf) {
    if (kmax_inf < 1 || kmax_inf > grid.kd)
        throw std::invalid_argument("random_field: kmax_inf out of range");
    VectorField u(grid);
    std::uint64_t draw = 0;
    const int kd       = grid.kd;
    // Fixed enumeration order so draws are reproducible; conjugate partners
    // filled by mirroring keeps the field exactly Hermitian.
    for (int k1 = -kd; k1 <= kd; ++k1)
        for (int k2 = -kd; k2 <= kd; ++k2)
            for (int k3 = -kd; k3 <= kd; ++k3) {
                if (!canonical_mode(k1, k2, k3)) continue;
                if (inf_norm(k1, k2, k3) > kmax_inf) continue;
                for (int c = 0; c < 3; ++c) {
                    const double re = rng.gaussian(draw++);
                    const double im = rng.gaussian(draw++);
                    u.at(c, k1, k2, k3)    = Complex{re, im};
                    u.at(c, -k1, -k2, -k3) = Complex{re, -im};
                }
            }
    return u;
}

VectorField random_divfree_field(GridSpec grid, const CounterRng& rng, int kmax_inf) {
    VectorField u = random_field(grid, rng, kmax_inf);
    leray_project(u);
    return u;
}

std::vector<Complex> random_scalar_field(GridSpec grid, const CounterRng& rng, int kmax_inf) {
    std::vector<Complex> q(grid.modes(), Complex{0.0, 0.0});
    std::uint64_t draw = 1u << 20;  // offset so scalar draws never reuse vector draws
    const int kd       = grid.kd;
    for (int k1 = -kd; k1 <= kd; ++k1)
        for (int k2 = -kd; k2 <= kd; ++k2)
            for (int k3 = -kd; k3 <= kd; ++k3) {
                if (!canonical_mode(k1, k2, k3)) continue;
                if (inf_norm(k1, k2, k3) > kmax_inf) continue;
                const double re             = rng.gaussian(draw++);
                const double im             = rng.gaussian(draw++);
                q[grid.index(k1, k2, k3)]    = Complex{re, im};
                q[grid.index(-k1, -k2, -k3)] = Complex{re, -im};
            }
    return q;
}

VectorField make_initial_data(GridSpec grid, DataFamily family, double eps0,
                              std::uint64_t base_seed, std::uint32_t substream) {
    if (!(eps0 >= 0.0)) throw std::invalid_argument("make_initial_data: eps0 must be >= 0");
    VectorField u(grid);
    const CounterRng rng(base_seed, substream, DrawPurpose::initial_data);
    const int kmax = std::min(2, grid.kd);
    switch (family) {
        case DataFamily::shear:
            u = make_shear(grid, 1.0);
            break;
        case DataFamily::random_phase:
            u = random_divfree_field(grid, rng, kmax);
            break;
        case DataFamily::mixed: {
            u                        = make_shear(grid, 1.0);
            VectorField perturbation = random_divfree_field(grid, rng, kmax);
            const double pnorm       = sobolev_norm(perturbation, 0.5);
            if (pnorm > 0.0) axpy(0.5 * sobolev_norm(u, 0.5) / pnorm, perturbation, u);
            break;
        }
    }
    const double norm = sobolev_norm(u, 0.5);
    if (eps0 == 0.0 || norm == 0.0) return VectorField::zeros(grid);
    u *= eps0 / norm;
    return u;
}

}  // namespace snse
