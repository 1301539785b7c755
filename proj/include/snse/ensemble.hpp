// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "snse/field_gen.hpp"
#include "snse/stats.hpp"
#include "snse/stepper.hpp"

namespace snse {

struct EnsembleConfig {
    GridSpec grid;
    int paths      = 200;
    double horizon = 5.0;
    double dt      = 1e-3;
    CutoffConfig cutoff;
    TransportSpec transport;
    DataFamily family = DataFamily::mixed;
    double eps0       = 0.02;
    double p0_target  = 0.05;
    std::uint64_t base_seed = 0;
    double delta  = 0.25;
    int threads   = 0;  // 0 = hardware concurrency
    double c_stab = 0.5;
    StepMode mode = StepMode::truncated;
};

/// Throws on violated preconditions (eps0^2 < eps_bar^2/2, paths >= 2,
/// integral horizon/dt, stability cap, delta in [dt, horizon]).
void validate_ensemble_config(const EnsembleConfig& cfg);

struct EnsembleReport {
    int schema_version = 1;
    int paths = 0, diverged = 0, stop_count = 0;

    MeanSE sup_q2, gap, diss_h1, diss_h32, sup_h12sq, int_h12_h32, u0_h12sq;
    MeanSE residual_total, residual_martingale, residual_bias;

    double stop_fraction     = 0.0;
    double wilson_half_width = 0.0;
    double wilson_low = 0.0, wilson_high = 0.0;

    double empirical_c65 = 0.0;  // sup_q2.mean / u0_h12sq.mean
    double markov_bound  = 0.0;  // gap.mean / (eps_bar^2 - eps0^2)

    double max_preflag_q2 = 0.0;
    double max_overshoot  = 0.0;

    // configuration echo
    double eps_bar = 0.0, eps0 = 0.0, epsilon_b = 0.0, horizon = 0.0, dt = 0.0;
    int grid_n = 0;
    std::uint64_t base_seed = 0;

    std::vector<PathSummary> per_path;
};

/// M independent truncated-mode paths on substreams 0..M-1, aggregated in
/// substream order (bit-reproducible for any thread count). Diverged paths
/// are excluded from every estimate and counted.
EnsembleReport run_ensemble(const EnsembleConfig& cfg);

/// Discrete shadow of the Ito energy identity in H^{1/2} along one
/// trajectory. Per step,
///   R_n = |u_{n+1}|_{H^{1/2}}^2 - |u_n|_{H^{1/2}}^2
///         + 2 dt sum_k (1+|k|^2)^{1/2} |k|^2 |u_{n+1,k}|^2
///         - 2 dt <F_n, Lambda u_n> - dt |Lambda^{1/2} G_n|_{L2}^2
///         - 2 dW_n <G_n, Lambda u_n>,
/// whose deterministic part telescopes to O(dt) quadrature bias and whose
/// martingale part 2 dW_n <G_n, Lambda u_n> has mean zero. The dissipation
/// weight (1+|k|^2)^{1/2}|k|^2 is the exact Dirichlet form of the Laplacian
/// in the H^{1/2} pairing.
struct ResidualSeries {
    std::vector<double> total, martingale, deterministic;
    double cumulative_total = 0.0, cumulative_martingale = 0.0, cumulative_det = 0.0;
};

ResidualSeries ito_energy_residual(const Trajectory& traj);

struct MarkovCheck {
    double stop_fraction     = 0.0;
    double markov_bound      = 0.0;
    double wilson_half_width = 0.0;
    double p0_target         = 0.0;
    bool bound_ok = false;  // stop_fraction <= markov_bound + 2 * half-width
    bool p0_ok    = false;  // stop_fraction <= p0_target
    bool pass() const { return bound_ok && p0_ok; }
};

MarkovCheck check_markov_lemma07(const EnsembleReport& report, double p0_target);

struct Eq100Check {
    std::vector<double> eps_b, x, gap, gap_se, c_point;  // x = eps_b^2 * diss_h1
    double c_emp = 0.0;                                  // weighted-fit slope
    double intercept = 0.0, intercept_se = 0.0;
    double c_ratio = 0.0;  // max/min of per-point constants
    bool slope_stable = false;
    bool intercept_ok = false;
    bool pass() const { return slope_stable && intercept_ok; }
};

/// Scaling-shape check of the gap inequality over an eps_b sweep; throws on
/// fewer than three sweep points.
Eq100Check check_eq100(const std::vector<EnsembleReport>& sweep);

/// Control-variate form: subtracts the eps_b = 0 companion ensemble's gap
/// (pure left-endpoint quadrature overshoot, no noise content) before
/// regressing, so the intercept genuinely measures deviation from the
/// eps_b^2 scaling rather than the known O(dt) artifact.
Eq100Check check_eq100(const std::vector<EnsembleReport>& sweep, const EnsembleReport& baseline);

struct SmallTimeCheck {
    std::vector<double> delta, stop_fraction, half_width;
    double fitted_exponent = 0.0;
    bool exponent_valid = false;
    bool nonincreasing  = false;  // within the Wilson intervals, as delta shrinks
    bool smallest_zero  = false;
    bool pass() const { return nonincreasing; }
};

/// Runs copies of the ensemble at horizons `deltas` (descending) and checks
/// that the stopping fraction is nonincreasing as the horizon shrinks;
/// throws if any delta < dt.
SmallTimeCheck check_small_time_lemma06(const EnsembleConfig& base,
                                        const std::vector<double>& deltas);

}  // namespace snse
