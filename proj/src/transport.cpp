// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/transport.hpp"

#include <cmath>
#include <stdexcept>

#include "snse/spectral_ops.hpp"

namespace snse {

TransportSpec make_constant_transport(const std::array<double, 3>& beta) {
    TransportSpec spec;
    spec.kind      = TransportSpec::Kind::constant_vector;
    spec.beta      = beta;
    spec.epsilon_b = std::sqrt(beta[0] * beta[0] + beta[1] * beta[1] + beta[2] * beta[2]);
    return spec;
}

TransportSpec make_field_transport(VectorField b, double certified_epsilon_b) {
    if (divergence_defect(b) > 1e-10)
        throw std::invalid_argument("make_field_transport: field is not divergence-free");
    if (!(certified_epsilon_b >= 0.0))
        throw std::invalid_argument("make_field_transport: epsilon_b must be nonnegative");
    TransportSpec spec;
    spec.kind      = TransportSpec::Kind::spectral_field;
    spec.field     = std::move(b);
    spec.epsilon_b = certified_epsilon_b;
    return spec;
}

VectorField advect(const TransportSpec& b, const VectorField& u, FourierWorkspace& ws) {
    if (b.is_constant()) return advect_constant(b.beta, u);
    return advect_field(*b.field, u, ws);
}

VectorField transport_term(const TransportSpec& b, const VectorField& u, FourierWorkspace& ws) {
    VectorField out = advect(b, u, ws);
    leray_project(out);
    return out;
}

double estimate_epsilon_b(const TransportSpec& b, const std::vector<VectorField>& probes,
                          FourierWorkspace& ws) {
    if (probes.empty()) throw std::invalid_argument("estimate_epsilon_b: no probes");
    double sup = 0.0;
    for (const auto& f : probes) {
        const VectorField bf = advect(b, f, ws);
        for (double s : {0.0, 0.5}) {
            const double denom = sobolev_norm(f, s + 1.0);
            if (denom == 0.0) throw std::invalid_argument("estimate_epsilon_b: zero probe");
            sup = std::max(sup, sobolev_norm(bf, s) / denom);
        }
    }
    return sup;
}

}  // namespace snse
