// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "snse/field.hpp"
#include "snse/rng.hpp"

namespace snse {

/// Unidirectional shear u = (amplitude * cos(x3), 0, 0): coefficients
/// amplitude/2 at k = (0,0,+-1), component 0. Divergence- and average-free,
/// and annihilated exactly by the advection term.
VectorField make_shear(GridSpec grid, double amplitude);

/// Random Hermitian field with independent complex-Gaussian coefficients on
/// all retained modes with 1 <= |k|_inf <= kmax_inf (kmax_inf <= kd).
/// Not divergence-free.
VectorField random_field(GridSpec grid, const CounterRng& rng, int kmax_inf);

/// Leray projection of random_field: divergence- and average-free.
VectorField random_divfree_field(GridSpec grid, const CounterRng& rng, int kmax_inf);

/// Random scalar coefficient cube (Hermitian), for gradient-field tests.
std::vector<Complex> random_scalar_field(GridSpec grid, const CounterRng& rng, int kmax_inf);

/// Initial-data families for ensembles.
enum class DataFamily { shear, random_phase, mixed };

/// Sample one initial datum: family field rescaled so |u0|_{H^{1/2}} equals
/// eps0 to round-off. Sampling is a pure function of (seed, substream).
VectorField make_initial_data(GridSpec grid, DataFamily family, double eps0,
                              std::uint64_t base_seed, std::uint32_t substream);

}  // namespace snse
