// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace snse {

/// Cutoff scale for the truncated advection term. The profile theta is the
/// fixed quintic smoothstep: 1 on [0,2], 0 on [3, inf), C^1-monotone between.
struct CutoffConfig {
    double eps_bar = 0.2;
};

/// theta(x): exactly 1 for x <= 2 and exactly 0 for x >= 3; on (2,3) the
/// symmetric quintic 1 - (10 s^3 - 15 s^4 + 6 s^5) with s = x - 2.
double theta_eval(double x);

/// Argument of the cutoff: (|u|_{H^{1/2}} + sqrt(int |u|_{H^{3/2}}^2 dt)) / eps_bar.
double psi_argument(double h12_norm, double dissipation_integral, double eps_bar);

/// theta of the argument above.
double psi_eval(double h12_norm, double dissipation_integral, const CutoffConfig& cut);

}  // namespace snse
