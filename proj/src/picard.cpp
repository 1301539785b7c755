// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/picard.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "snse/spectral_ops.hpp"

namespace snse {

namespace {

struct ModeTables {
    std::vector<double> wh, w32, decay, kx, ky, kz, k_sq;

    explicit ModeTables(GridSpec g, double dt) {
        const auto m = g.modes();
        wh.resize(m);
        w32.resize(m);
        decay.resize(m);
        kx.resize(m);
        ky.resize(m);
        kz.resize(m);
        k_sq.resize(m);
        for (std::size_t idx = 0; idx < m; ++idx) {
            const auto k = g.wave(idx);
            const double ks = static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
            k_sq[idx]  = ks;
            wh[idx]    = bessel_weight(ks, 0.5);
            w32[idx]   = bessel_weight(ks, 1.5);
            decay[idx] = std::exp(-ks * dt);
            kx[idx]    = static_cast<double>(k[0]);
            ky[idx]    = static_cast<double>(k[1]);
            kz[idx]    = static_cast<double>(k[2]);
        }
    }

    void norms(const VectorField& u, double& h12, double& h32) const {
        h12 = 0.0;
        h32 = 0.0;
        for (int c = 0; c < 3; ++c) {
            const auto comp = u.component(c);
            for (std::size_t idx = 0; idx < wh.size(); ++idx) {
                const double mag = std::norm(comp[idx]);
                h12 += wh[idx] * mag;
                h32 += w32[idx] * mag;
            }
        }
    }
};

void check_time_grid(const Trajectory& t, const NoisePath& noise, const StepperConfig& cfg) {
    if (!(t.grid == cfg.grid)) throw std::invalid_argument("picard: grid mismatch");
    if (t.dt != cfg.dt || noise.dt != cfg.dt) throw std::invalid_argument("picard: dt mismatch");
    if (static_cast<int>(t.fields.size()) != noise.steps() + 1)
        throw std::invalid_argument("picard: trajectory/noise step mismatch");
}

// Advection forcing of the frozen trajectory: f_n = -psi^2(v)(t_n) P div(v_n (x) v_n).
std::vector<VectorField> cutoff_forcing(const Trajectory& v, const StepperConfig& cfg,
                                        const CutoffConfig& cut, FourierWorkspace& ws) {
    const int steps = static_cast<int>(v.fields.size()) - 1;
    std::vector<VectorField> forcing;
    forcing.reserve(static_cast<std::size_t>(steps));
    std::vector<Complex> scratch;
    VectorField nl(v.grid);
    for (int n = 0; n < steps; ++n) {
        const auto i     = static_cast<std::size_t>(n);
        const double psi = psi_eval(std::sqrt(v.h12sq[i]), v.diss[i], cut);
        const double applied  = (cfg.mode == StepMode::truncated) ? psi : 1.0;
        const double nl_scale = -(applied * applied);
        if (nl_scale != 0.0 && v.h12sq[i] > 0.0) {
            self_tensor_divergence_into(v.fields[i], ws, nl, scratch);
            leray_project(nl);
            VectorField f(v.grid);
            for (std::size_t q = 0; q < f.data.size(); ++q) f.data[q] = nl_scale * nl.data[q];
            forcing.push_back(std::move(f));
        } else {
            forcing.push_back(VectorField::zeros(v.grid));
        }
    }
    return forcing;
}

// Integrate the linear equation with per-step forcing and the noise
// coefficient frozen from u_prev; identical per-mode arithmetic to the
// dynamics stepper, so the fixed point coincides with the direct trajectory.
Trajectory linear_pass(const std::vector<VectorField>& forcing, const Trajectory& u_prev,
                       const VectorField& u0, const NoisePath& noise, const StepperConfig& cfg,
                       const CutoffConfig& cut, const ModeTables& tables, FourierWorkspace& ws) {
    const int steps = noise.steps();
    const GridSpec g = cfg.grid;
    const auto m     = g.modes();

    Trajectory out;
    out.grid    = g;
    out.dt      = cfg.dt;
    out.mode    = cfg.mode;
    out.eps_bar = cut.eps_bar;
    out.fields.reserve(static_cast<std::size_t>(steps) + 1);
    out.dW = noise.increments;

    VectorField u = leray_projected(u0);
    double h12 = 0.0, h32 = 0.0;
    tables.norms(u, h12, h32);
    double diss = 0.0;
    out.fields.push_back(u);
    out.h12sq.push_back(h12);
    out.h32sq.push_back(h32);
    out.diss.push_back(diss);

    const bool const_b = cfg.transport.is_constant();
    const auto& beta   = cfg.transport.beta;
    VectorField gbuf(g);

    for (int n = 0; n < steps; ++n) {
        const auto i    = static_cast<std::size_t>(n);
        const double dW = noise.increments[i];
        const Complex* f0 = forcing[i].component(0).data();
        const Complex* f1 = forcing[i].component(1).data();
        const Complex* f2 = forcing[i].component(2).data();
        const Complex* p0 = u_prev.fields[i].component(0).data();
        const Complex* p1 = u_prev.fields[i].component(1).data();
        const Complex* p2 = u_prev.fields[i].component(2).data();
        if (!const_b) gbuf = transport_term(cfg.transport, u_prev.fields[i], ws);
        const Complex* g0 = gbuf.component(0).data();
        const Complex* g1 = gbuf.component(1).data();
        const Complex* g2 = gbuf.component(2).data();

        Complex* c0 = u.component(0).data();
        Complex* c1 = u.component(1).data();
        Complex* c2 = u.component(2).data();

        double h12a = 0.0, h32a = 0.0;
        for (std::size_t idx = 0; idx < m; ++idx) {
            Complex G0, G1, G2;
            if (const_b) {
                const double bk =
                    beta[0] * tables.kx[idx] + beta[1] * tables.ky[idx] + beta[2] * tables.kz[idx];
                G0 = Complex{-bk * p0[idx].imag(), bk * p0[idx].real()};
                G1 = Complex{-bk * p1[idx].imag(), bk * p1[idx].real()};
                G2 = Complex{-bk * p2[idx].imag(), bk * p2[idx].real()};
            } else {
                G0 = g0[idx];
                G1 = g1[idx];
                G2 = g2[idx];
            }
            const double e = tables.decay[idx];
            Complex n0 = e * (c0[idx] + cfg.dt * f0[idx] + dW * G0);
            Complex n1 = e * (c1[idx] + cfg.dt * f1[idx] + dW * G1);
            Complex n2 = e * (c2[idx] + cfg.dt * f2[idx] + dW * G2);
            const double k2 = tables.k_sq[idx];
            if (k2 != 0.0) {
                const Complex dot =
                    (tables.kx[idx] * n0 + tables.ky[idx] * n1 + tables.kz[idx] * n2) / k2;
                n0 -= tables.kx[idx] * dot;
                n1 -= tables.ky[idx] * dot;
                n2 -= tables.kz[idx] * dot;
            } else {
                n0 = n1 = n2 = Complex{0.0, 0.0};
            }
            const double mag = std::norm(n0) + std::norm(n1) + std::norm(n2);
            h12a += tables.wh[idx] * mag;
            h32a += tables.w32[idx] * mag;
            c0[idx] = n0;
            c1[idx] = n1;
            c2[idx] = n2;
        }
        diss += cfg.dt * h32;  // left-endpoint quadrature, h32 still holds node n
        h12 = h12a;
        h32 = h32a;
        out.fields.push_back(u);
        out.h12sq.push_back(h12);
        out.h32sq.push_back(h32);
        out.diss.push_back(diss);
    }
    return out;
}

}  // namespace

double trajectory_energy(const Trajectory& traj) {
    double sup = 0.0, integral = 0.0;
    const int steps = static_cast<int>(traj.fields.size()) - 1;
    for (int n = 0; n <= steps; ++n) sup = std::max(sup, traj.h12sq[static_cast<std::size_t>(n)]);
    for (int n = 0; n < steps; ++n) integral += traj.dt * traj.h32sq[static_cast<std::size_t>(n)];
    return sup + integral;
}

double difference_energy(const Trajectory& a, const Trajectory& b) {
    if (a.fields.size() != b.fields.size() || !(a.grid == b.grid) || a.dt != b.dt)
        throw std::invalid_argument("difference_energy: incompatible trajectories");
    const ModeTables tables(a.grid, a.dt);
    const int steps = static_cast<int>(a.fields.size()) - 1;
    double sup = 0.0, integral = 0.0;
    VectorField d(a.grid);
    for (int n = 0; n <= steps; ++n) {
        const auto i = static_cast<std::size_t>(n);
        d            = a.fields[i];
        d -= b.fields[i];
        double h12 = 0.0, h32 = 0.0;
        tables.norms(d, h12, h32);
        sup = std::max(sup, h12);
        if (n < steps) integral += a.dt * h32;
    }
    return sup + integral;
}

double sup_h12_difference(const Trajectory& a, const Trajectory& b) {
    if (a.fields.size() != b.fields.size() || !(a.grid == b.grid))
        throw std::invalid_argument("sup_h12_difference: incompatible trajectories");
    const ModeTables tables(a.grid, a.dt);
    double sup = 0.0;
    VectorField d(a.grid);
    for (std::size_t i = 0; i < a.fields.size(); ++i) {
        d = a.fields[i];
        d -= b.fields[i];
        double h12 = 0.0, h32 = 0.0;
        tables.norms(d, h12, h32);
        sup = std::max(sup, h12);
    }
    return std::sqrt(sup);
}

Trajectory zero_trajectory(GridSpec grid, double dt, int steps, StepMode mode, double eps_bar) {
    Trajectory t;
    t.grid    = grid;
    t.dt      = dt;
    t.mode    = mode;
    t.eps_bar = eps_bar;
    t.fields.assign(static_cast<std::size_t>(steps) + 1, VectorField::zeros(grid));
    t.h12sq.assign(static_cast<std::size_t>(steps) + 1, 0.0);
    t.h32sq.assign(static_cast<std::size_t>(steps) + 1, 0.0);
    t.diss.assign(static_cast<std::size_t>(steps) + 1, 0.0);
    return t;
}

Trajectory inner_iteration(const Trajectory& v, const Trajectory& u_prev, const VectorField& u0,
                           const NoisePath& noise, const StepperConfig& cfg,
                           const CutoffConfig& cut) {
    check_time_grid(v, noise, cfg);
    check_time_grid(u_prev, noise, cfg);
    FourierWorkspace ws(cfg.grid);
    const ModeTables tables(cfg.grid, cfg.dt);
    const auto forcing = cutoff_forcing(v, cfg, cut, ws);
    return linear_pass(forcing, u_prev, u0, noise, cfg, cut, tables, ws);
}

FixedPointResult inner_fixed_point(const Trajectory& v, const VectorField& u0,
                                   const NoisePath& noise, const StepperConfig& cfg,
                                   const CutoffConfig& cut, const PicardSettings& settings) {
    check_time_grid(v, noise, cfg);
    FourierWorkspace ws(cfg.grid);
    const ModeTables tables(cfg.grid, cfg.dt);
    const auto forcing = cutoff_forcing(v, cfg, cut, ws);

    FixedPointResult res;
    Trajectory u_prev = zero_trajectory(cfg.grid, cfg.dt, noise.steps(), cfg.mode, cut.eps_bar);
    for (int m = 0; m < settings.max_iter; ++m) {
        Trajectory u_m = linear_pass(forcing, u_prev, u0, noise, cfg, cut, tables, ws);
        const double k_m = trajectory_energy(u_m);
        const double d_m = difference_energy(u_m, u_prev);
        res.trace.K.push_back(k_m);
        res.trace.D.push_back(d_m);
        res.trace.ratio.push_back(m >= 1 && res.trace.D[static_cast<std::size_t>(m) - 1] > 0.0
                                      ? d_m / res.trace.D[static_cast<std::size_t>(m) - 1]
                                      : std::numeric_limits<double>::quiet_NaN());
        if (m == 0) {
            res.trace.k0      = k_m;
            res.trace.tol_abs = settings.tol_rel * k_m;
        }
        res.trace.iterations = m + 1;
        if (m >= 1 && d_m <= res.trace.tol_abs) {
            res.converged        = true;
            res.trace.converged  = true;
            res.trajectory       = std::move(u_m);
            break;
        }
        u_prev = std::move(u_m);
    }
    if (!res.converged) res.trajectory = std::move(u_prev);
    return res;
}

FixedPointResult outer_iteration(const Trajectory& u_prev, const VectorField& u0,
                                 const NoisePath& noise, const StepperConfig& cfg,
                                 const CutoffConfig& cut, const PicardSettings& settings) {
    return inner_fixed_point(u_prev, u0, noise, cfg, cut, settings);
}

OuterResult outer_fixed_point_seeded(Trajectory seed, const VectorField& u0,
                                     const NoisePath& noise, const StepperConfig& cfg,
                                     const CutoffConfig& cut, const PicardSettings& settings) {
    OuterResult res;
    Trajectory u_prev = std::move(seed);
    for (int m = 0; m < settings.max_iter; ++m) {
        FixedPointResult step = outer_iteration(u_prev, u0, noise, cfg, cut, settings);
        res.inner_iters.push_back(step.trace.iterations);
        if (!step.converged) {
            // a non-convergent inner solve poisons the outer scheme; report
            // with the trace accumulated so far
            res.trajectory = std::move(step.trajectory);
            return res;
        }
        const double k_m = trajectory_energy(step.trajectory);
        const double d_m = difference_energy(step.trajectory, u_prev);
        res.trace.K.push_back(k_m);
        res.trace.D.push_back(d_m);
        res.trace.ratio.push_back(m >= 1 && res.trace.D[static_cast<std::size_t>(m) - 1] > 0.0
                                      ? d_m / res.trace.D[static_cast<std::size_t>(m) - 1]
                                      : std::numeric_limits<double>::quiet_NaN());
        if (m == 0) {
            res.trace.k0      = k_m;
            res.trace.tol_abs = settings.tol_rel * k_m;
        }
        res.trace.iterations = m + 1;
        if (m >= 1 && d_m <= res.trace.tol_abs) {
            res.converged       = true;
            res.trace.converged = true;
            res.trajectory      = std::move(step.trajectory);
            return res;
        }
        u_prev = std::move(step.trajectory);
    }
    res.trajectory = std::move(u_prev);
    return res;
}

OuterResult outer_fixed_point(const VectorField& u0, const NoisePath& noise,
                              const StepperConfig& cfg, const CutoffConfig& cut,
                              const PicardSettings& settings) {
    return outer_fixed_point_seeded(
        zero_trajectory(cfg.grid, cfg.dt, noise.steps(), cfg.mode, cut.eps_bar), u0, noise, cfg,
        cut, settings);
}

UniquenessReport pathwise_uniqueness_check(const VectorField& u0, const NoisePath& noise,
                                           const StepperConfig& cfg, const CutoffConfig& cut,
                                           const PicardSettings& settings) {
    OuterResult from_zero = outer_fixed_point(u0, noise, cfg, cut, settings);
    OuterResult from_heat = outer_fixed_point_seeded(
        heat_trajectory(u0, cfg.grid, cfg.dt, noise.steps(), cfg.mode, cut.eps_bar), u0, noise,
        cfg, cut, settings);
    Trajectory direct = run_path(u0, cfg, cut, noise);

    UniquenessReport rep;
    rep.converged           = from_zero.converged && from_heat.converged;
    rep.diff_between_seeds  = sup_h12_difference(from_zero.trajectory, from_heat.trajectory);
    rep.diff_zero_vs_direct = sup_h12_difference(from_zero.trajectory, direct);
    rep.diff_heat_vs_direct = sup_h12_difference(from_heat.trajectory, direct);
    return rep;
}

}  // namespace snse
