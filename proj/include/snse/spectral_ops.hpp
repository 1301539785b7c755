// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

#include "snse/fft.hpp"
#include "snse/field.hpp"

namespace snse {

/// Bessel weight (1 + |k|^2)^s for one mode.
inline double bessel_weight(double k_sq, double s) { return std::pow(1.0 + k_sq, s); }

/// Average-free Leray projection, per mode: u_hat - k (k.u_hat)/|k|^2,
/// with the k = 0 mode set to zero.
void leray_project(VectorField& u);
VectorField leray_projected(VectorField u);

/// sqrt( sum_k (1+|k|^2)^s |u_hat(k)|^2 ).
double sobolev_norm(const VectorField& u, double s);
double sobolev_norm_sq(const VectorField& u, double s);

/// Max over modes of |u_hat(-k) - conj(u_hat(k))| relative to the largest
/// coefficient magnitude; zero for a field that is real in physical space.
double hermitian_defect(const VectorField& u);

/// Max over modes of |k.u_hat| / |u_hat| (0 where u_hat = 0).
double divergence_defect(const VectorField& u);

/// Dealiased pseudospectral divergence of the tensor product, projected:
/// component i of the result is P[ sum_j i k_j (u_i v_j)^hat ]. Collocation
/// products are evaluated on the n^3 grid; retained modes obey the 2/3 rule,
/// so quadratic products are alias-free.
VectorField nonlinear_term(const VectorField& u, const VectorField& v, FourierWorkspace& ws);
VectorField nonlinear_term(const VectorField& u, const VectorField& v);

/// Same as nonlinear_term but without the final Leray projection (the raw
/// tensor divergence); used by oracles that test the product stage.
VectorField tensor_divergence(const VectorField& u, const VectorField& v, FourierWorkspace& ws);

/// Allocation-free symmetric case (v = u) of tensor_divergence, for
/// time-stepping loops. `scratch` holds one coefficient cube.
void self_tensor_divergence_into(const VectorField& u, FourierWorkspace& ws, VectorField& out,
                                 std::vector<Complex>& scratch);

/// Directional derivative (b.grad)u for a constant vector b: the exact
/// multiplier i (b.k) u_hat(k).
VectorField advect_constant(const std::array<double, 3>& b, const VectorField& u);

/// Pseudospectral (b.grad)u for a spectral transport field b.
VectorField advect_field(const VectorField& b, const VectorField& u, FourierWorkspace& ws);

/// Ratio |u (x) v|_{H^{1/2}} / (|u|_{H^{1/2}}|v|_{H^{3/2}} + |v|_{H^{1/2}}|u|_{H^{3/2}})
/// with the tensor norm taken as the root-sum-square of the nine dealiased
/// component norms. Throws on zero input.
double product_inequality_ratio(const VectorField& u, const VectorField& v, FourierWorkspace& ws);

/// Exact truncated convolution of two scalar coefficient cubes (test oracle;
/// alias-free by construction).
std::vector<Complex> convolve_scalar(const GridSpec& g, std::span<const Complex> a,
                                     std::span<const Complex> b);

/// Exact convolution-sum evaluation of the tensor divergence
/// sum_j i k_j (u_i v_j)^hat, restricted to retained modes. Refuses n > 8.
VectorField brute_force_convolution(const VectorField& u, const VectorField& v);

}  // namespace snse
