// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/stepper.hpp"

#include <cmath>
#include <stdexcept>

#include "snse/spectral_ops.hpp"

namespace snse {

StepperConfig make_stepper_config(GridSpec grid, double dt, StepMode mode,
                                  TransportSpec transport, double c_stab) {
    StepperConfig cfg;
    cfg.grid      = grid;
    cfg.dt        = dt;
    cfg.mode      = mode;
    cfg.transport = std::move(transport);
    cfg.c_stab    = c_stab;
    if (!(dt > 0.0)) throw std::invalid_argument("stepper: dt must be positive");
    if (dt > cfg.stability_cap())
        throw std::invalid_argument("stepper: dt exceeds the stability cap c_stab/(1+eps_b^2 kd^2)");
    return cfg;
}

PathStepper::PathStepper(const StepperConfig& cfg, const CutoffConfig& cut)
    : cfg_(cfg), cut_(cut), ws_(cfg.grid), forcing_(cfg.grid), noise_coef_(cfg.grid) {
    const GridSpec g = cfg_.grid;
    const auto m     = g.modes();
    k_sq_.resize(m);
    wh_.resize(m);
    decay_.resize(m);
    kx_.resize(m);
    ky_.resize(m);
    kz_.resize(m);
    for (std::size_t idx = 0; idx < m; ++idx) {
        const auto k = g.wave(idx);
        const double k_sq = static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        k_sq_[idx]  = k_sq;
        wh_[idx]    = bessel_weight(k_sq, 0.5);
        decay_[idx] = std::exp(-k_sq * cfg_.dt);
        kx_[idx]    = static_cast<double>(k[0]);
        ky_[idx]    = static_cast<double>(k[1]);
        kz_[idx]    = static_cast<double>(k[2]);
    }
}

PathState PathStepper::initial_state(VectorField u0) {
    if (!(u0.grid == cfg_.grid)) throw std::invalid_argument("initial_state: grid mismatch");
    if (divergence_defect(u0) > 1e-10)
        throw std::invalid_argument("initial_state: u0 is not divergence-free");
    leray_project(u0);

    PathState s;
    s.u = std::move(u0);
    const auto m = cfg_.grid.modes();
    double h12 = 0.0, h32 = 0.0, h1 = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto comp = s.u.component(c);
        for (std::size_t idx = 0; idx < m; ++idx) {
            const double mag = std::norm(comp[idx]);
            h12 += wh_[idx] * mag;
            h32 += wh_[idx] * (1.0 + k_sq_[idx]) * mag;
            h1 += (1.0 + k_sq_[idx]) * mag;
        }
    }
    s.h12sq = h12;
    s.h32sq = h32;
    s.h1sq  = h1;
    s.q_sq  = h12;
    if (s.q_sq > cut_.eps_bar * cut_.eps_bar) {
        s.stopped = true;
        s.tau     = 0.0;
    }
    return s;
}

StepRecord PathStepper::step(PathState& state, double dW) {
    const double dt = cfg_.dt;
    const auto m    = cfg_.grid.modes();

    StepRecord rec;
    rec.dW           = dW;
    rec.h12sq_before = state.h12sq;
    rec.h32sq_before = state.h32sq;
    rec.h1sq_before  = state.h1sq;

    const double psi = psi_eval(std::sqrt(state.h12sq), state.diss_integral, cut_);
    rec.psi          = psi;
    const double applied  = (cfg_.mode == StepMode::truncated) ? psi : 1.0;
    const double nl_scale = -(applied * applied);

    const bool have_forcing = (nl_scale != 0.0) && (state.h12sq > 0.0);
    if (have_forcing) {
        self_tensor_divergence_into(state.u, ws_, forcing_, prod_scratch_);
        leray_project(forcing_);
    }

    const bool const_b = cfg_.transport.is_constant();
    if (!const_b) noise_coef_ = transport_term(cfg_.transport, state.u, ws_);
    const auto& beta = cfg_.transport.beta;

    Complex* u0       = state.u.component(0).data();
    Complex* u1c      = state.u.component(1).data();
    Complex* u2       = state.u.component(2).data();
    const Complex* f0 = forcing_.component(0).data();
    const Complex* f1 = forcing_.component(1).data();
    const Complex* f2 = forcing_.component(2).data();
    const Complex* g0 = noise_coef_.component(0).data();
    const Complex* g1 = noise_coef_.component(1).data();
    const Complex* g2 = noise_coef_.component(2).data();

    double fp = 0.0, nb = 0.0, np = 0.0;
    double h12a = 0.0, h32a = 0.0, h1a = 0.0, dira = 0.0;

    for (std::size_t idx = 0; idx < m; ++idx) {
        const double w  = wh_[idx];
        const double k2 = k_sq_[idx];
        const Complex a0 = u0[idx], a1 = u1c[idx], a2 = u2[idx];

        Complex F0{0.0, 0.0}, F1{0.0, 0.0}, F2{0.0, 0.0};
        if (have_forcing) {
            F0 = nl_scale * f0[idx];
            F1 = nl_scale * f1[idx];
            F2 = nl_scale * f2[idx];
        }
        Complex G0, G1, G2;
        if (const_b) {
            const double bk = beta[0] * kx_[idx] + beta[1] * ky_[idx] + beta[2] * kz_[idx];
            G0 = Complex{-bk * a0.imag(), bk * a0.real()};
            G1 = Complex{-bk * a1.imag(), bk * a1.real()};
            G2 = Complex{-bk * a2.imag(), bk * a2.real()};
        } else {
            G0 = g0[idx];
            G1 = g1[idx];
            G2 = g2[idx];
        }

        fp += w * ((F0 * std::conj(a0)).real() + (F1 * std::conj(a1)).real() +
                   (F2 * std::conj(a2)).real());
        nb += w * (std::norm(G0) + std::norm(G1) + std::norm(G2));
        np += w * ((G0 * std::conj(a0)).real() + (G1 * std::conj(a1)).real() +
                   (G2 * std::conj(a2)).real());

        const double e = decay_[idx];
        Complex n0 = e * (a0 + dt * F0 + dW * G0);
        Complex n1 = e * (a1 + dt * F1 + dW * G1);
        Complex n2 = e * (a2 + dt * F2 + dW * G2);

        if (k2 != 0.0) {
            const Complex dot = (kx_[idx] * n0 + ky_[idx] * n1 + kz_[idx] * n2) / k2;
            n0 -= kx_[idx] * dot;
            n1 -= ky_[idx] * dot;
            n2 -= kz_[idx] * dot;
        } else {
            n0 = n1 = n2 = Complex{0.0, 0.0};
        }

        const double mag = std::norm(n0) + std::norm(n1) + std::norm(n2);
        h12a += w * mag;
        h32a += w * (1.0 + k2) * mag;
        h1a += (1.0 + k2) * mag;
        dira += w * k2 * mag;

        u0[idx]  = n0;
        u1c[idx] = n1;
        u2[idx]  = n2;
    }

    state.diss_integral += dt * state.h32sq;  // left-endpoint quadrature
    state.t += dt;
    state.h12sq = h12a;
    state.h32sq = h32a;
    state.h1sq  = h1a;
    state.q_sq  = h12a + state.diss_integral;

    rec.forcing_pair    = fp;
    rec.noise_bessel_sq = nb;
    rec.noise_pair      = np;
    rec.h12sq_after     = h12a;
    rec.h32sq_after     = h32a;
    rec.dirichlet_after = dira;
    rec.diss_after      = state.diss_integral;
    rec.q_sq_after      = state.q_sq;
    rec.t_after         = state.t;

    if (!std::isfinite(h12a + h32a)) {
        state.diverged = true;
        rec.diverged   = true;
    } else if (!state.stopped && state.q_sq > cut_.eps_bar * cut_.eps_bar) {
        state.stopped = true;
        state.tau     = state.t;
    }
    rec.stopped_after = state.stopped;
    return rec;
}

double Trajectory::psi_argument_at(int n) const {
    const auto i = static_cast<std::size_t>(n);
    return psi_argument(std::sqrt(h12sq[i]), diss[i], eps_bar);
}

Trajectory run_path(const VectorField& u0, const StepperConfig& cfg, const CutoffConfig& cut,
                    const NoisePath& noise) {
    if (noise.dt != cfg.dt) throw std::invalid_argument("run_path: noise dt mismatch");
    PathStepper stepper(cfg, cut);
    PathState s = stepper.initial_state(u0);

    Trajectory traj;
    traj.grid    = cfg.grid;
    traj.dt      = cfg.dt;
    traj.mode    = cfg.mode;
    traj.eps_bar = cut.eps_bar;
    const int n  = noise.steps();
    traj.fields.reserve(static_cast<std::size_t>(n) + 1);
    traj.fields.push_back(s.u);
    traj.h12sq.push_back(s.h12sq);
    traj.h32sq.push_back(s.h32sq);
    traj.diss.push_back(0.0);
    traj.stopped = s.stopped;
    traj.tau     = s.tau;

    for (int i = 0; i < n; ++i) {
        const StepRecord rec = stepper.step(s, noise.increments[static_cast<std::size_t>(i)]);
        traj.records.push_back(rec);
        traj.dW.push_back(rec.dW);
        traj.fields.push_back(s.u);
        traj.h12sq.push_back(s.h12sq);
        traj.h32sq.push_back(s.h32sq);
        traj.diss.push_back(s.diss_integral);
        if (s.diverged) {
            traj.diverged = true;
            break;
        }
    }
    traj.stopped = s.stopped;
    traj.tau     = s.tau;
    return traj;
}

PathSummary run_path_summary(PathStepper& stepper, const VectorField& u0,
                             const NoisePath& noise) {
    if (noise.dt != stepper.config().dt)
        throw std::invalid_argument("run_path_summary: noise dt mismatch");
    const double dt      = stepper.config().dt;
    const double eps_bar = stepper.cutoff().eps_bar;

    PathState s = stepper.initial_state(u0);
    PathSummary ps;
    ps.u0_h12sq  = s.h12sq;
    ps.sup_q_sq  = s.q_sq;
    ps.sup_h12sq = s.h12sq;
    ps.stopped   = s.stopped;
    ps.tau       = s.tau;
    bool flagged = s.stopped;
    if (flagged)
        ps.overshoot = s.q_sq - eps_bar * eps_bar;
    else
        ps.max_preflag_q_sq = s.q_sq;

    const int n = noise.steps();
    for (int i = 0; i < n; ++i) {
        const StepRecord rec = stepper.step(s, noise.increments[static_cast<std::size_t>(i)]);
        ps.steps_run = i + 1;

        ps.diss_h1 += dt * rec.h1sq_before;
        ps.diss_h32 += dt * rec.h32sq_before;
        ps.int_h12_h32 += dt * std::sqrt(rec.h12sq_before * rec.h32sq_before);

        const double martingale = 2.0 * rec.dW * rec.noise_pair;
        const double residual   = rec.h12sq_after - rec.h12sq_before +
                                2.0 * dt * rec.dirichlet_after - 2.0 * dt * rec.forcing_pair -
                                dt * rec.noise_bessel_sq - martingale;
        ps.residual_total += residual;
        ps.residual_martingale += martingale;
        ps.residual_det += residual - martingale;

        if (rec.diverged) {
            ps.diverged = true;
            break;
        }
        ps.sup_q_sq  = std::max(ps.sup_q_sq, rec.q_sq_after);
        ps.gap       = std::max(ps.gap, rec.q_sq_after - ps.u0_h12sq);
        ps.sup_h12sq = std::max(ps.sup_h12sq, rec.h12sq_after);
        if (!flagged) {
            if (rec.stopped_after) {
                flagged      = true;
                ps.stopped   = true;
                ps.tau       = s.tau;
                ps.overshoot = rec.q_sq_after - eps_bar * eps_bar;
            } else {
                ps.max_preflag_q_sq = std::max(ps.max_preflag_q_sq, rec.q_sq_after);
            }
        }
    }
    return ps;
}

Complex exact_shear_solution(Complex amplitude, int k3, double beta, double t, double w_t) {
    const double k3_sq = static_cast<double>(k3) * k3;
    const double drift = (-k3_sq + 0.5 * beta * beta * k3_sq) * t;
    const double phase = beta * static_cast<double>(k3) * w_t;
    return amplitude * std::exp(Complex{drift, phase});
}

Trajectory heat_trajectory(const VectorField& u0, GridSpec grid, double dt, int steps,
                           StepMode mode, double eps_bar) {
    if (!(u0.grid == grid)) throw std::invalid_argument("heat_trajectory: grid mismatch");
    Trajectory traj;
    traj.grid    = grid;
    traj.dt      = dt;
    traj.mode    = mode;
    traj.eps_bar = eps_bar;

    const auto m = grid.modes();
    std::vector<double> decay(m), wh(m), w32(m);
    for (std::size_t idx = 0; idx < m; ++idx) {
        const auto k = grid.wave(idx);
        const double k_sq = static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        decay[idx] = std::exp(-k_sq * dt);
        wh[idx]    = bessel_weight(k_sq, 0.5);
        w32[idx]   = bessel_weight(k_sq, 1.5);
    }

    VectorField u = leray_projected(u0);
    double diss   = 0.0;
    for (int step = 0; step <= steps; ++step) {
        double h12 = 0.0, h32 = 0.0;
        for (int c = 0; c < 3; ++c) {
            const auto comp = u.component(c);
            for (std::size_t idx = 0; idx < m; ++idx) {
                const double mag = std::norm(comp[idx]);
                h12 += wh[idx] * mag;
                h32 += w32[idx] * mag;
            }
        }
        traj.fields.push_back(u);
        traj.h12sq.push_back(h12);
        traj.h32sq.push_back(h32);
        traj.diss.push_back(diss);
        if (step == steps) break;
        diss += dt * h32;
        for (int c = 0; c < 3; ++c) {
            auto comp = u.component(c);
            for (std::size_t idx = 0; idx < m; ++idx) comp[idx] *= decay[idx];
        }
    }
    return traj;
}

}  // namespace snse
