// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "snse/cutoff.hpp"
#include "snse/fft.hpp"
#include "snse/field.hpp"
#include "snse/rng.hpp"
#include "snse/transport.hpp"

namespace snse {

enum class StepMode { raw, truncated };

/// Time-stepping configuration. The explicit noise term has per-mode
/// amplification 1 + i(b.k) dW, so dt is capped by
/// c_stab / (1 + epsilon_b^2 kd^2) to keep its variance contribution bounded.
struct StepperConfig {
    GridSpec grid;
    double dt = 1e-3;
    StepMode mode = StepMode::truncated;
    TransportSpec transport;
    double c_stab = 0.5;

    double stability_cap() const {
        const double k = static_cast<double>(grid.kd);
        return c_stab / (1.0 + transport.epsilon_b * transport.epsilon_b * k * k);
    }
};

/// Validating constructor; throws if dt exceeds the stability cap.
StepperConfig make_stepper_config(GridSpec grid, double dt, StepMode mode,
                                  TransportSpec transport, double c_stab = 0.5);

/// One stochastic trajectory at a single time: velocity field, running
/// dissipation integral (left-endpoint quadrature of |u|_{H^{3/2}}^2),
/// Q(t)^2 = |u|_{H^{1/2}}^2 + integral, and the stopping status.
struct PathState {
    double t = 0.0;
    VectorField u;
    double diss_integral = 0.0;
    double h12sq = 0.0;  // |u|_{H^{1/2}}^2, cached
    double h32sq = 0.0;  // |u|_{H^{3/2}}^2, cached
    double h1sq  = 0.0;  // |u|_{H^1}^2, cached
    double q_sq  = 0.0;
    bool stopped   = false;
    double tau     = -1.0;
    bool diverged  = false;
};

/// Scalars produced by one update u_n -> u_{n+1}; enough to reconstruct the
/// discrete energy balance without storing fields.
struct StepRecord {
    double t_after = 0.0;
    double dW      = 0.0;
    double psi     = 0.0;  // theta of the cutoff argument at t_n (diagnostic in raw mode)
    double h12sq_before = 0.0, h32sq_before = 0.0, h1sq_before = 0.0;
    double h12sq_after = 0.0, h32sq_after = 0.0;
    double diss_after = 0.0, q_sq_after = 0.0;
    double forcing_pair    = 0.0;  // <F_n, Lambda u_n>, F the advection forcing
    double noise_bessel_sq = 0.0;  // |Lambda^{1/2} G_n|_{L2}^2
    double noise_pair      = 0.0;  // <G_n, Lambda u_n>
    double dirichlet_after = 0.0;  // sum_k (1+|k|^2)^{1/2} |k|^2 |u_{n+1}|^2
    bool stopped_after = false;
    bool diverged      = false;
};

/// Semi-implicit Euler-Maruyama stepper: exact integrating factor
/// e^{-|k|^2 dt} for the heat part, explicit advection forcing
/// -psi^2 P div(u (x) u) (psi == 1 in raw mode), explicit Ito noise
/// increment dW P((b.grad)u), followed by a Leray re-projection.
class PathStepper {
  public:
    PathStepper(const StepperConfig& cfg, const CutoffConfig& cut);

    const StepperConfig& config() const { return cfg_; }
    const CutoffConfig& cutoff() const { return cut_; }

    /// Validates divergence/average-freeness of u0 and computes the cached
    /// norms; flags an immediate stop if already Q(0) > eps_bar.
    PathState initial_state(VectorField u0);

    StepRecord step(PathState& state, double dW);

  private:
    StepperConfig cfg_;
    CutoffConfig cut_;
    FourierWorkspace ws_;
    std::vector<double> k_sq_, wh_, decay_;
    std::vector<double> kx_, ky_, kz_;
    VectorField forcing_;
    VectorField noise_coef_;
    std::vector<Complex> prod_scratch_;
};

/// Full trajectory with per-node norms and per-step records.
struct Trajectory {
    GridSpec grid;
    double dt = 0.0;
    StepMode mode = StepMode::truncated;
    double eps_bar = 0.0;
    std::vector<VectorField> fields;   // steps + 1
    std::vector<double> h12sq, h32sq;  // per node
    std::vector<double> diss;          // per node, left-endpoint integral
    std::vector<double> dW;            // per step
    std::vector<StepRecord> records;   // per step
    bool stopped  = false;
    double tau    = -1.0;
    bool diverged = false;

    int steps() const { return static_cast<int>(records.size()); }
    double q_sq(int n) const { return h12sq[static_cast<std::size_t>(n)] + diss[static_cast<std::size_t>(n)]; }
    double psi_argument_at(int n) const;
};

Trajectory run_path(const VectorField& u0, const StepperConfig& cfg, const CutoffConfig& cut,
                    const NoisePath& noise);

/// Per-path summary statistics accumulated without storing fields.
struct PathSummary {
    double u0_h12sq = 0.0;
    double sup_q_sq = 0.0;
    double gap      = 0.0;  // sup_n (Q(t_n)^2 - |u0|_{H^{1/2}}^2)
    double sup_h12sq = 0.0;
    double diss_h1 = 0.0, diss_h32 = 0.0;
    double int_h12_h32 = 0.0;  // int |u|_{H^{1/2}} |u|_{H^{3/2}} dt
    double residual_total = 0.0, residual_martingale = 0.0, residual_det = 0.0;
    double max_preflag_q_sq = 0.0;
    double overshoot = 0.0;  // Q(tau)^2 - eps_bar^2 on stopped paths
    bool stopped  = false;
    double tau    = -1.0;
    bool diverged = false;
    int steps_run = 0;
};

/// Integrates with a caller-owned stepper (reused across paths).
PathSummary run_path_summary(PathStepper& stepper, const VectorField& u0,
                             const NoisePath& noise);

/// Ito solution of the reduced per-mode shear SDE
/// dX = -k3^2 X dt + i beta k3 X dW:
/// X(t) = X(0) exp((-k3^2 + beta^2 k3^2 / 2) t + i beta k3 W_t).
Complex exact_shear_solution(Complex amplitude, int k3, double beta, double t, double w_t);

/// Trajectory of the pure heat flow of u0 (Picard seed helper).
Trajectory heat_trajectory(const VectorField& u0, GridSpec grid, double dt, int steps,
                           StepMode mode, double eps_bar);

}  // namespace snse
