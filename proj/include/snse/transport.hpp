// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "snse/fft.hpp"
#include "snse/field.hpp"

namespace snse {

/// Divergence-free transport field b together with a certified bound
/// epsilon_b for |(b.grad)f|_{H^s} <= epsilon_b |f|_{H^{s+1}}, s in {0, 1/2}.
struct TransportSpec {
    enum class Kind { constant_vector, spectral_field };

    Kind kind = Kind::constant_vector;
    std::array<double, 3> beta = {0.0, 0.0, 0.0};
    std::optional<VectorField> field;
    double epsilon_b = 0.0;

    bool is_constant() const { return kind == Kind::constant_vector; }
};

/// Constant transport vector; the certification epsilon_b = |beta| is exact
/// (per mode, |b.k|^2 (1+|k|^2)^s <= |b|^2 (1+|k|^2)^{s+1}).
TransportSpec make_constant_transport(const std::array<double, 3>& beta);

/// Spectral transport field; rejects fields whose per-mode divergence defect
/// exceeds 1e-10. `certified_epsilon_b` must dominate the measured sup-ratio
/// over any probe set (checked by estimate_epsilon_b in tests).
TransportSpec make_field_transport(VectorField b, double certified_epsilon_b);

/// Unprojected directional derivative (b.grad)u.
VectorField advect(const TransportSpec& b, const VectorField& u, FourierWorkspace& ws);

/// P((b.grad)u): the transport-noise coefficient of the dynamics.
VectorField transport_term(const TransportSpec& b, const VectorField& u, FourierWorkspace& ws);

/// Max over probes and s in {0, 1/2} of |(b.grad)f|_{H^s} / |f|_{H^{s+1}}.
/// Throws on an empty probe list or a zero probe.
double estimate_epsilon_b(const TransportSpec& b, const std::vector<VectorField>& probes,
                          FourierWorkspace& ws);

}  // namespace snse
