// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "snse/stepper.hpp"

namespace snse {

struct PicardSettings {
    int max_iter   = 50;
    double tol_rel = 1e-10;  // convergence threshold relative to K^(0)
};

/// Per-iteration diagnostics of a fixed-point run. K[m] and D[m] are the
/// discrete trajectory energies sup_n |.|_{H^{1/2}}^2 + sum_n |.|_{H^{3/2}}^2 dt
/// of the m-th iterate and of the difference from the previous iterate;
/// ratio[m] = D[m]/D[m-1] measures the contraction.
struct PicardTrace {
    std::vector<double> K, D, ratio;
    double k0      = 0.0;
    double tol_abs = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct FixedPointResult {
    Trajectory trajectory;
    PicardTrace trace;
    bool converged = false;
};

/// Trajectory energy sup_n h12sq + sum_{n < N} dt h32sq (left endpoint).
double trajectory_energy(const Trajectory& traj);

/// Same energy evaluated on the node-wise difference a - b.
double difference_energy(const Trajectory& a, const Trajectory& b);

/// sup_n |a_n - b_n|_{H^{1/2}}.
double sup_h12_difference(const Trajectory& a, const Trajectory& b);

/// All-zero trajectory on the given time grid (the u^(-1) = 0 seed).
Trajectory zero_trajectory(GridSpec grid, double dt, int steps, StepMode mode, double eps_bar);

/// One linear solve of the frozen-coefficient equation: advection forcing
/// frozen from the trajectory v (with its own cutoff factor psi^2(v)), noise
/// coefficient frozen from u_prev, integrated with the same integrating-factor
/// stepper conventions as the dynamics.
Trajectory inner_iteration(const Trajectory& v, const Trajectory& u_prev, const VectorField& u0,
                           const NoisePath& noise, const StepperConfig& cfg,
                           const CutoffConfig& cut);

/// Iterates inner_iteration from u^(-1) = 0 until the difference energy
/// drops below tol_rel * K^(0); the fixed point solves the frozen-advection
/// equation on the grid. Non-convergence is reported in the result, with the
/// full trace (a diverging iteration signals epsilon_b too large).
FixedPointResult inner_fixed_point(const Trajectory& v, const VectorField& u0,
                                   const NoisePath& noise, const StepperConfig& cfg,
                                   const CutoffConfig& cut, const PicardSettings& settings = {});

/// One outer step: solve the equation with advection frozen from u_prev via
/// inner_fixed_point (v = u_prev).
FixedPointResult outer_iteration(const Trajectory& u_prev, const VectorField& u0,
                                 const NoisePath& noise, const StepperConfig& cfg,
                                 const CutoffConfig& cut, const PicardSettings& settings = {});

struct OuterResult {
    Trajectory trajectory;
    PicardTrace trace;              // outer-level energies and differences
    std::vector<int> inner_iters;   // inner iteration count per outer step
    bool converged = false;
};

OuterResult outer_fixed_point(const VectorField& u0, const NoisePath& noise,
                              const StepperConfig& cfg, const CutoffConfig& cut,
                              const PicardSettings& settings = {});

/// Same, but seeded from an arbitrary initial trajectory u^(-1).
OuterResult outer_fixed_point_seeded(Trajectory seed, const VectorField& u0,
                                     const NoisePath& noise, const StepperConfig& cfg,
                                     const CutoffConfig& cut, const PicardSettings& settings = {});

/// Runs the outer scheme from two different initial iterates (zero and the
/// heat flow of u0) and compares both fixed points with the direct stepper.
struct UniquenessReport {
    double diff_between_seeds = 0.0;  // sup-H^{1/2} distance
    double diff_zero_vs_direct = 0.0;
    double diff_heat_vs_direct = 0.0;
    bool converged = false;

    double worst() const {
        return std::max({diff_between_seeds, diff_zero_vs_direct, diff_heat_vs_direct});
    }
};

UniquenessReport pathwise_uniqueness_check(const VectorField& u0, const NoisePath& noise,
                                           const StepperConfig& cfg, const CutoffConfig& cut,
                                           const PicardSettings& settings = {});

}  // namespace snse
