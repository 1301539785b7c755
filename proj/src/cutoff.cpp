// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/cutoff.hpp"

#include <cmath>

namespace snse {

double theta_eval(double x) {
    if (x <= 2.0) return 1.0;
    if (x >= 3.0) return 0.0;
    const double s = x - 2.0;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double psi_argument(double h12_norm, double dissipation_integral, double eps_bar) {
    return (h12_norm + std::sqrt(dissipation_integral)) / eps_bar;
}

double psi_eval(double h12_norm, double dissipation_integral, const CutoffConfig& cut) {
    return theta_eval(psi_argument(h12_norm, dissipation_integral, cut.eps_bar));
}

}  // namespace snse
