// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "snse/spectral_ops.hpp"

namespace snse {

void validate_ensemble_config(const EnsembleConfig& cfg) {
    if (cfg.paths < 2) throw std::invalid_argument("ensemble: paths must be >= 2");
    const double eb2 = cfg.cutoff.eps_bar * cfg.cutoff.eps_bar;
    if (!(cfg.eps0 * cfg.eps0 < 0.5 * eb2))
        throw std::invalid_argument("ensemble: requires eps0^2 < eps_bar^2 / 2");
    if (!(cfg.p0_target > 0.0 && cfg.p0_target < 1.0))
        throw std::invalid_argument("ensemble: p0_target must lie in (0,1)");
    step_count(cfg.horizon, cfg.dt);
    if (cfg.delta < cfg.dt || cfg.delta > cfg.horizon)
        throw std::invalid_argument("ensemble: delta must lie in [dt, horizon]");
    // throws if dt violates the stability cap
    make_stepper_config(cfg.grid, cfg.dt, cfg.mode, cfg.transport, cfg.c_stab);
}

EnsembleReport run_ensemble(const EnsembleConfig& cfg) {
    validate_ensemble_config(cfg);
    const StepperConfig scfg =
        make_stepper_config(cfg.grid, cfg.dt, cfg.mode, cfg.transport, cfg.c_stab);

    std::vector<PathSummary> summaries(static_cast<std::size_t>(cfg.paths));
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&]() {
        try {
            PathStepper stepper(scfg, cfg.cutoff);
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= cfg.paths) break;
                const auto sub = static_cast<std::uint32_t>(i);
                VectorField u0 =
                    make_initial_data(cfg.grid, cfg.family, cfg.eps0, cfg.base_seed, sub);
                const double norm = sobolev_norm(u0, 0.5);
                if (norm > cfg.eps0 * (1.0 + 1e-12))
                    throw std::runtime_error("ensemble: initial datum exceeds eps0");
                const NoisePath noise = sample_path(cfg.base_seed, sub, cfg.horizon, cfg.dt);
                summaries[static_cast<std::size_t>(i)] = run_path_summary(stepper, u0, noise);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };

    int n_threads = cfg.threads > 0 ? cfg.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = std::min(n_threads, cfg.paths);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    // deterministic reduction in substream order
    EnsembleReport rep;
    rep.paths     = cfg.paths;
    rep.eps_bar   = cfg.cutoff.eps_bar;
    rep.eps0      = cfg.eps0;
    rep.epsilon_b = cfg.transport.epsilon_b;
    rep.horizon   = cfg.horizon;
    rep.dt        = cfg.dt;
    rep.grid_n    = cfg.grid.n;
    rep.base_seed = cfg.base_seed;

    std::vector<double> v_supq2, v_gap, v_dh1, v_dh32, v_suph12, v_cross, v_u0, v_rt, v_rm, v_rb;
    for (const auto& s : summaries) {
        if (s.diverged) {
            ++rep.diverged;
            continue;
        }
        v_supq2.push_back(s.sup_q_sq);
        v_gap.push_back(s.gap);
        v_dh1.push_back(s.diss_h1);
        v_dh32.push_back(s.diss_h32);
        v_suph12.push_back(s.sup_h12sq);
        v_cross.push_back(s.int_h12_h32);
        v_u0.push_back(s.u0_h12sq);
        v_rt.push_back(s.residual_total);
        v_rm.push_back(s.residual_martingale);
        v_rb.push_back(s.residual_det);
        if (s.stopped) {
            ++rep.stop_count;
            rep.max_overshoot = std::max(rep.max_overshoot, s.overshoot);
        }
        rep.max_preflag_q2 = std::max(rep.max_preflag_q2, s.max_preflag_q_sq);
    }
    const int effective = static_cast<int>(v_supq2.size());
    if (effective < 2) throw std::runtime_error("ensemble: fewer than two usable paths");

    rep.sup_q2              = mean_se(v_supq2);
    rep.gap                 = mean_se(v_gap);
    rep.diss_h1             = mean_se(v_dh1);
    rep.diss_h32            = mean_se(v_dh32);
    rep.sup_h12sq           = mean_se(v_suph12);
    rep.int_h12_h32         = mean_se(v_cross);
    rep.u0_h12sq            = mean_se(v_u0);
    rep.residual_total      = mean_se(v_rt);
    rep.residual_martingale = mean_se(v_rm);
    rep.residual_bias       = mean_se(v_rb);

    rep.stop_fraction   = static_cast<double>(rep.stop_count) / effective;
    const auto wilson   = wilson_interval(rep.stop_count, effective);
    rep.wilson_half_width = wilson.half_width;
    rep.wilson_low        = wilson.low;
    rep.wilson_high       = wilson.high;

    rep.empirical_c65 =
        rep.u0_h12sq.mean > 0.0 ? rep.sup_q2.mean / rep.u0_h12sq.mean : 0.0;
    const double denom = rep.eps_bar * rep.eps_bar - rep.eps0 * rep.eps0;
    rep.markov_bound   = denom > 0.0 ? rep.gap.mean / denom : 0.0;

    rep.per_path = std::move(summaries);
    return rep;
}

ResidualSeries ito_energy_residual(const Trajectory& traj) {
    if (traj.records.empty() || traj.dW.size() != traj.records.size())
        throw std::invalid_argument("ito_energy_residual: trajectory has no dW records");
    ResidualSeries series;
    const double dt = traj.dt;
    series.total.reserve(traj.records.size());
    for (const auto& rec : traj.records) {
        const double martingale = 2.0 * rec.dW * rec.noise_pair;
        const double total = rec.h12sq_after - rec.h12sq_before + 2.0 * dt * rec.dirichlet_after -
                             2.0 * dt * rec.forcing_pair - dt * rec.noise_bessel_sq - martingale;
        series.total.push_back(total);
        series.martingale.push_back(martingale);
        series.deterministic.push_back(total - martingale);
        series.cumulative_total += total;
        series.cumulative_martingale += martingale;
        series.cumulative_det += total - martingale;
    }
    return series;
}

MarkovCheck check_markov_lemma07(const EnsembleReport& report, double p0_target) {
    MarkovCheck c;
    c.stop_fraction     = report.stop_fraction;
    c.markov_bound      = report.markov_bound;
    c.wilson_half_width = report.wilson_half_width;
    c.p0_target         = p0_target;
    c.bound_ok = report.stop_fraction <= report.markov_bound + 2.0 * report.wilson_half_width;
    c.p0_ok    = report.stop_fraction <= p0_target;
    return c;
}

namespace {

Eq100Check eq100_impl(const std::vector<EnsembleReport>& sweep, const EnsembleReport* baseline) {
    if (sweep.size() < 3)
        throw std::invalid_argument("check_eq100: need at least three eps_b sweep points");
    Eq100Check c;
    for (const auto& rep : sweep) {
        const double x = rep.epsilon_b * rep.epsilon_b * rep.diss_h1.mean;
        double gap     = rep.gap.mean;
        double se      = rep.gap.se;
        if (baseline) {
            gap -= baseline->gap.mean;
            se = std::sqrt(se * se + baseline->gap.se * baseline->gap.se);
        }
        c.eps_b.push_back(rep.epsilon_b);
        c.x.push_back(x);
        c.gap.push_back(gap);
        c.gap_se.push_back(se > 0.0 ? se : 1e-300);
        c.c_point.push_back(x > 0.0 ? gap / x : 0.0);
    }
    double c_min = c.c_point[0], c_max = c.c_point[0];
    for (double r : c.c_point) {
        c_min = std::min(c_min, r);
        c_max = std::max(c_max, r);
    }
    c.c_ratio      = c_min > 0.0 ? c_max / c_min : std::numeric_limits<double>::infinity();
    c.slope_stable = c_min > 0.0 && c.c_ratio <= 3.0;

    const auto fit = weighted_linear_fit(c.x, c.gap, c.gap_se);
    c.c_emp         = fit.slope;
    c.intercept     = fit.intercept;
    c.intercept_se  = fit.se_intercept;
    c.intercept_ok  = std::abs(fit.intercept) <= 3.0 * fit.se_intercept;
    return c;
}

}  // namespace

Eq100Check check_eq100(const std::vector<EnsembleReport>& sweep) {
    return eq100_impl(sweep, nullptr);
}

Eq100Check check_eq100(const std::vector<EnsembleReport>& sweep, const EnsembleReport& baseline) {
    return eq100_impl(sweep, &baseline);
}

SmallTimeCheck check_small_time_lemma06(const EnsembleConfig& base,
                                        const std::vector<double>& deltas) {
    SmallTimeCheck c;
    for (double d : deltas) {
        if (d < base.dt) throw std::invalid_argument("check_small_time: delta < dt");
        EnsembleConfig cfg = base;
        cfg.horizon        = d;
        cfg.delta          = std::min(base.delta, d);
        const auto rep     = run_ensemble(cfg);
        c.delta.push_back(d);
        c.stop_fraction.push_back(rep.stop_fraction);
        c.half_width.push_back(rep.wilson_half_width);
    }
    c.nonincreasing = true;
    for (std::size_t i = 1; i < c.delta.size(); ++i) {
        if (!(c.delta[i] < c.delta[i - 1]))
            throw std::invalid_argument("check_small_time: deltas must be descending");
        if (c.stop_fraction[i] > c.stop_fraction[i - 1] + c.half_width[i] + c.half_width[i - 1])
            c.nonincreasing = false;
    }
    c.smallest_zero = c.stop_fraction.back() == 0.0;

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < c.delta.size(); ++i)
        if (c.stop_fraction[i] > 0.0) {
            lx.push_back(std::log(c.delta[i]));
            ly.push_back(std::log(c.stop_fraction[i]));
        }
    if (lx.size() >= 2) {
        c.fitted_exponent = linear_fit(lx, ly).slope;
        c.exponent_valid  = true;
    }
    return c;
}

}  // namespace snse
