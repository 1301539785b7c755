// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <thread>

#include <json.hpp>

#include "snse/io.hpp"
#include "snse/picard.hpp"
#include "snse/spectral_ops.hpp"

namespace snse {

namespace {

VectorField verify_field(GridSpec g, std::uint32_t substream, bool divfree) {
    const CounterRng rng(0x7e57ULL, substream, DrawPurpose::initial_data);
    return divfree ? random_divfree_field(g, rng, g.kd) : random_field(g, rng, g.kd);
}

double rel_l2(const VectorField& a, const VectorField& b) {
    VectorField d = a;
    d -= b;
    const double ref = std::max(sobolev_norm(a, 0.0), sobolev_norm(b, 0.0));
    return ref > 0.0 ? sobolev_norm(d, 0.0) / ref : 0.0;
}

CheckResult check_leray_idempotent() {
    double worst = 0.0;
    for (int n : {8, 16})
        for (std::uint32_t s = 0; s < 100; ++s) {
            GridSpec g     = GridSpec::cubic(n);
            VectorField pu = leray_projected(verify_field(g, s, false));
            worst          = std::max(worst, rel_l2(leray_projected(pu), pu));
        }
    return {"leray_idempotent", worst <= 1e-12, worst, "max rel L2 defect vs 1e-12"};
}

CheckResult check_leray_gradients() {
    double worst = 0.0;
    for (int n : {8, 16})
        for (std::uint32_t s = 0; s < 100; ++s) {
            GridSpec g = GridSpec::cubic(n);
            const CounterRng rng(0x7e57ULL, s, DrawPurpose::initial_data);
            const auto q = random_scalar_field(g, rng, g.kd);
            VectorField grad(g);
            for (std::size_t idx = 0; idx < g.modes(); ++idx) {
                const auto k = g.wave(idx);
                for (int c = 0; c < 3; ++c)
                    grad.component(c)[idx] = Complex{0.0, static_cast<double>(k[c])} * q[idx];
            }
            const double gn = sobolev_norm(grad, 0.0);
            if (gn == 0.0) continue;
            worst = std::max(worst, sobolev_norm(leray_projected(grad), 0.0) / gn);
        }
    return {"leray_annihilates_gradients", worst <= 1e-12, worst, "max rel L2 vs 1e-12"};
}

CheckResult check_leray_preserves() {
    double worst = 0.0;
    for (int n : {8, 16})
        for (std::uint32_t s = 0; s < 100; ++s) {
            GridSpec g     = GridSpec::cubic(n);
            VectorField pu = verify_field(g, s, true);
            worst          = std::max(worst, rel_l2(leray_projected(pu), pu));
            worst          = std::max(worst, divergence_defect(pu));
        }
    return {"leray_preserves_divfree", worst <= 1e-12, worst, "max defect vs 1e-12"};
}

CheckResult check_parseval() {
    double worst = 0.0;
    GridSpec g   = GridSpec::cubic(16);
    for (std::uint32_t s = 0; s < 50; ++s) {
        VectorField u = verify_field(g, s, true);
        double l2     = 0.0;
        for (const auto& c : u.data) l2 += std::norm(c);
        worst = std::max(worst, std::abs(sobolev_norm_sq(u, 0.0) - l2) / l2);
    }
    return {"parseval_s0", worst <= 1e-13, worst, "rel deviation vs 1e-13"};
}

CheckResult check_interpolation() {
    GridSpec g    = GridSpec::cubic(16);
    int violations = 0;
    double worst   = 0.0;
    for (std::uint32_t s = 0; s < 2000; ++s) {
        VectorField u   = verify_field(g, s, true);
        const double h1 = sobolev_norm_sq(u, 1.0);
        const double cs = sobolev_norm(u, 0.5) * sobolev_norm(u, 1.5);
        if (h1 > cs * (1.0 + 1e-12)) ++violations;
        worst = std::max(worst, h1 / cs);
    }
    VectorField shell(g);
    shell.at(0, 0, 0, 1)  = Complex{0.4, 0.2};
    shell.at(0, 0, 0, -1) = Complex{0.4, -0.2};
    const double eq = sobolev_norm_sq(shell, 1.0) /
                      (sobolev_norm(shell, 0.5) * sobolev_norm(shell, 1.5));
    const bool pass = violations == 0 && std::abs(eq - 1.0) <= 1e-12;
    return {"interpolation_inequality", pass, worst,
            "violations=" + std::to_string(violations) + ", single-shell ratio=" + format_g17(eq)};
}

CheckResult check_transport_bound(const RunConfig& rc) {
    GridSpec g = GridSpec::cubic(16);
    FourierWorkspace ws(g);
    auto b          = to_transport(rc);
    const double eb = b.epsilon_b > 0.0 ? b.epsilon_b : 0.1;
    if (b.epsilon_b == 0.0) b = make_constant_transport({0.0, 0.0, 0.1});
    int violations = 0;
    double sup     = 0.0;
    for (std::uint32_t s = 0; s < 2000; ++s) {
        VectorField u  = verify_field(g, s, true);
        VectorField bu = advect(b, u, ws);
        for (double sv : {0.0, 0.5}) {
            const double ratio = sobolev_norm(bu, sv) / sobolev_norm(u, sv + 1.0);
            if (ratio > eb) ++violations;
            sup = std::max(sup, ratio / eb);
        }
    }
    return {"transport_bound", violations == 0, sup,
            "violations=" + std::to_string(violations) + ", sup ratio/eps_b=" + format_g17(sup)};
}

CheckResult check_nonlinear_oracle() {
    GridSpec g = GridSpec::cubic(8);
    FourierWorkspace ws(g);
    double worst = 0.0;
    for (std::uint32_t s = 0; s < 10; ++s) {
        VectorField u = verify_field(g, 900 + s, true);
        VectorField v = verify_field(g, 950 + s, true);
        worst         = std::max(worst, rel_l2(tensor_divergence(u, v, ws),
                                               brute_force_convolution(u, v)));
    }
    return {"nonlinear_matches_convolution", worst <= 1e-10, worst, "max rel L2 vs 1e-10"};
}

CheckResult check_energy_flux() {
    GridSpec g = GridSpec::cubic(16);
    FourierWorkspace ws(g);
    double worst = 0.0;
    for (std::uint32_t s = 0; s < 20; ++s) {
        VectorField u  = verify_field(g, s, true);
        VectorField nl = nonlinear_term(u, u, ws);
        double pairing = 0.0;
        for (std::size_t i = 0; i < u.data.size(); ++i)
            pairing += (nl.data[i] * std::conj(u.data[i])).real();
        worst = std::max(worst,
                         std::abs(pairing) / (sobolev_norm(nl, 0.0) * sobolev_norm(u, 0.0)));
    }
    return {"energy_flux_orthogonality", worst <= 1e-10, worst, "max rel pairing vs 1e-10"};
}

CheckResult check_theta() {
    bool ok = theta_eval(0.0) == 1.0 && theta_eval(2.0) == 1.0 && theta_eval(3.0) == 0.0 &&
              theta_eval(4.0) == 0.0 && std::abs(theta_eval(2.5) - 0.5) < 1e-15;
    double prev = 1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = theta_eval(2.0 + 1e-3 * i);
        ok &= v <= prev + 1e-15;
        prev = v;
    }
    return {"theta_profile", ok, theta_eval(2.5), "plateau/support/monotone/midpoint"};
}

CheckResult check_truncation_consistency() {
    GridSpec g = GridSpec::cubic(8);
    CutoffConfig cut{0.0125};
    auto transport = make_constant_transport({0.0, 0.0, 0.1});
    auto cfg_t     = make_stepper_config(g, 1e-2, StepMode::truncated, transport);
    auto cfg_r     = make_stepper_config(g, 1e-2, StepMode::raw, transport);
    int mismatches = 0, crossings = 0;
    for (std::uint32_t s = 0; s < 10; ++s) {
        auto u0    = make_initial_data(g, DataFamily::mixed, 0.02, 0x7e57, s);
        auto noise = sample_path(0x7e57, s, 2.0, 1e-2);
        auto a     = run_path(u0, cfg_t, cut, noise);
        auto b     = run_path(u0, cfg_r, cut, noise);
        int first_beyond = a.steps() + 1;
        for (int n = 0; n <= a.steps(); ++n)
            if (a.psi_argument_at(n) > 2.0) {
                first_beyond = n;
                ++crossings;
                break;
            }
        for (int n = 0; n <= std::min(first_beyond, a.steps()); ++n)
            if (std::memcmp(a.fields[static_cast<std::size_t>(n)].data.data(),
                            b.fields[static_cast<std::size_t>(n)].data.data(),
                            a.fields[0].data.size() * sizeof(Complex)) != 0)
                ++mismatches;
    }
    return {"truncation_consistency", mismatches == 0 && crossings > 0,
            static_cast<double>(mismatches),
            "bitwise mismatches=" + std::to_string(mismatches) +
                ", crossings=" + std::to_string(crossings)};
}

CheckResult check_shear_decay() {
    GridSpec g = GridSpec::cubic(8);
    CutoffConfig cut{0.2};
    auto cfg   = make_stepper_config(g, 1e-3, StepMode::truncated,
                                     make_constant_transport({0.0, 0.0, 0.0}));
    auto noise = sample_path(1, 0, 1.0, 1e-3);
    auto traj  = run_path(make_shear(g, 0.05), cfg, cut, noise);
    const double rel =
        std::abs(traj.fields.back().at(0, 0, 0, 1) - Complex{0.025 * std::exp(-1.0), 0.0}) /
        (0.025 * std::exp(-1.0));
    return {"shear_heat_decay", rel <= 1e-12, rel, "rel endpoint deviation vs 1e-12"};
}

CheckResult check_reproducibility(const RunConfig& rc) {
    EnsembleConfig e = to_ensemble_config(rc, 1);
    e.grid           = GridSpec::cubic(8);
    e.paths          = 8;
    e.horizon        = 0.25;
    e.dt             = std::min(rc.time_dt, 1e-2);
    e.delta          = e.horizon;
    const std::string h = config_hash(rc);
    auto a              = ensemble_report_json(run_ensemble(e), h);
    e.threads           = 2;
    auto b              = ensemble_report_json(run_ensemble(e), h);
    return {"reproducibility", a == b, a == b ? 0.0 : 1.0,
            "ensemble JSON bytes identical across thread counts"};
}

}  // namespace

std::vector<CheckResult> verify_suite(const RunConfig& cfg, int /*threads*/) {
    std::vector<CheckResult> results;
    results.push_back(check_leray_idempotent());
    results.push_back(check_leray_gradients());
    results.push_back(check_leray_preserves());
    results.push_back(check_parseval());
    results.push_back(check_interpolation());
    results.push_back(check_transport_bound(cfg));
    results.push_back(check_nonlinear_oracle());
    results.push_back(check_energy_flux());
    results.push_back(check_theta());
    results.push_back(check_truncation_consistency());
    results.push_back(check_shear_decay());
    results.push_back(check_reproducibility(cfg));
    return results;
}

OracleStudy shear_convergence_study(const RunConfig& cfg, const std::vector<double>& dts,
                                    int paths, int threads) {
    OracleStudy study;
    study.paths       = paths;
    const GridSpec g  = GridSpec::cubic(8);
    const double beta = cfg.noise_b[2];
    const double horizon = 1.0;
    CutoffConfig cut{cfg.cutoff_eps_bar};

    for (double dt : dts) {
        auto scfg = make_stepper_config(g, dt, StepMode::raw,
                                        make_constant_transport({0.0, 0.0, beta}),
                                        cfg.time_c_stab);
        std::vector<double> err_sq(static_cast<std::size_t>(paths), 0.0);
        std::atomic<int> next{0};
        auto worker = [&]() {
            PathStepper stepper(scfg, cut);
            const VectorField u0 = make_initial_data(g, DataFamily::shear, cfg.data_eps0,
                                                     cfg.base_seed, 0);
            const Complex a0     = u0.at(0, 0, 0, 1);
            while (true) {
                const int p = next.fetch_add(1);
                if (p >= paths) break;
                const auto noise =
                    sample_path(cfg.base_seed, static_cast<std::uint32_t>(p), horizon, dt);
                PathState s = stepper.initial_state(u0);
                for (double dw : noise.increments) stepper.step(s, dw);
                const Complex exact =
                    exact_shear_solution(a0, 1, beta, horizon, noise.sum());
                // both Hermitian partners carry the same error magnitude
                err_sq[static_cast<std::size_t>(p)] =
                    2.0 * std::norm(s.u.at(0, 0, 0, 1) - exact);
            }
        };
        int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
        if (n_threads < 1) n_threads = 1;
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        double sum = 0.0;
        for (double e : err_sq) sum += e;
        study.dts.push_back(dt);
        study.rms.push_back(std::sqrt(sum / paths));
    }

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < study.dts.size(); ++i) {
        lx.push_back(std::log2(study.dts[i]));
        ly.push_back(std::log2(study.rms[i]));
    }
    study.fitted_order = lx.size() >= 2 ? linear_fit(lx, ly).slope : 0.0;
    return study;
}

namespace {

int run_single(const RunConfig& cfg, const std::string& out_dir) {
    const GridSpec g = GridSpec::cubic(cfg.grid_n);
    auto scfg        = to_stepper_config(cfg, StepMode::truncated);
    auto u0    = make_initial_data(g, parse_family(cfg.data_family), cfg.data_eps0,
                                   cfg.base_seed, 0);
    auto noise = sample_path(cfg.base_seed, 0, cfg.time_t, cfg.time_dt);
    auto traj  = run_path(u0, scfg, to_cutoff(cfg), noise);
    write_file(out_dir + "/trajectory.csv", trajectory_csv(traj, config_hash(cfg)));
    return 0;
}

int run_ensemble_cmd(const RunConfig& cfg, const std::string& out_dir, int threads) {
    auto rep = run_ensemble(to_ensemble_config(cfg, threads));
    write_file(out_dir + "/ensemble_report.json", ensemble_report_json(rep, config_hash(cfg)));
    write_file(out_dir + "/paths.csv", path_summaries_csv(rep, config_hash(cfg)));
    return 0;
}

nlohmann::json picard_entry(const OuterResult& res) {
    nlohmann::json e;
    e["converged"]  = res.converged;
    e["iterations"] = res.trace.iterations;
    e["K"]          = res.trace.K;
    e["D"]          = res.trace.D;
    std::vector<double> finite_ratios;
    for (std::size_t m = 1; m < res.trace.ratio.size(); ++m)
        finite_ratios.push_back(res.trace.ratio[m]);
    e["ratio"]       = finite_ratios;
    e["inner_iters"] = res.inner_iters;
    return e;
}

int run_picard_cmd(const RunConfig& cfg, const std::string& out_dir, int /*threads*/) {
    const GridSpec g = GridSpec::cubic(cfg.grid_n);
    auto cut         = to_cutoff(cfg);
    auto u0    = make_initial_data(g, parse_family(cfg.data_family), cfg.data_eps0,
                                   cfg.base_seed, 0);
    auto noise = sample_path(cfg.base_seed, 0, cfg.time_t, cfg.time_dt);
    PicardSettings settings{cfg.picard_max_iter, cfg.picard_tol};

    auto main_res = outer_fixed_point(u0, noise, to_stepper_config(cfg, StepMode::truncated),
                                      cut, settings);
    write_file(out_dir + "/picard_trace.csv", picard_trace_csv(main_res.trace, config_hash(cfg)));

    const double eb = config_epsilon_b(cfg);
    nlohmann::json sweep;
    for (double bar_scale : {1.0, 0.5}) {
        for (double eb_scale : {0.5, 1.0, 2.0}) {
            CutoffConfig c{cfg.cutoff_eps_bar * bar_scale};
            const double eps_b = eb * eb_scale;
            const std::string key = "eps_bar=" + format_g17(c.eps_bar) +
                                    ";eps_b=" + format_g17(eps_b) +
                                    ";seed=" + std::to_string(cfg.base_seed);
            try {
                auto scfg = make_stepper_config(g, cfg.time_dt, StepMode::truncated,
                                                make_constant_transport({0.0, 0.0, eps_b}),
                                                cfg.time_c_stab);
                sweep[key] = picard_entry(outer_fixed_point(u0, noise, scfg, c, settings));
            } catch (const std::exception& ex) {
                sweep[key] = {{"valid", false}, {"error", ex.what()}};
            }
        }
    }
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["config_hash"]    = config_hash(cfg);
    doc["sweep"]          = sweep;
    write_file(out_dir + "/picard_sweep.json", doc.dump(2) + "\n");
    return main_res.converged ? 0 : 1;
}

int run_verify_cmd(const RunConfig& cfg, const std::string& out_dir, int threads) {
    const auto results = verify_suite(cfg, threads);
    nlohmann::json failures = nlohmann::json::array();
    std::printf("%-32s %-6s %-14s %s\n", "check", "status", "margin", "detail");
    for (const auto& r : results) {
        std::printf("%-32s %-6s %-14.3e %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                    r.margin, r.detail.c_str());
        if (!r.pass)
            failures.push_back({{"check", r.name}, {"margin", r.margin}, {"detail", r.detail}});
    }
    std::printf("failures: %s\n", failures.dump().c_str());
    if (!out_dir.empty()) {
        nlohmann::json doc;
        doc["schema_version"] = kSchemaVersion;
        doc["config_hash"]    = config_hash(cfg);
        nlohmann::json arr    = nlohmann::json::array();
        for (const auto& r : results)
            arr.push_back({{"check", r.name}, {"pass", r.pass}, {"margin", r.margin},
                           {"detail", r.detail}});
        doc["results"] = arr;
        write_file(out_dir + "/verify_report.json", doc.dump(2) + "\n");
    }
    return failures.empty() ? 0 : 1;
}

int run_oracle_cmd(const RunConfig& cfg, const std::string& out_dir, int threads) {
    const std::vector<double> dts = {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0, 1.0 / 512.0,
                                     1.0 / 1024.0};
    const int paths = std::min(cfg.ensemble_m, 1000);
    auto study      = shear_convergence_study(cfg, dts, paths, threads);
    write_file(out_dir + "/oracle_convergence.csv",
               oracle_csv(study.dts, study.rms, study.paths, study.fitted_order,
                          config_hash(cfg)));
    return 0;
}

}  // namespace

int dispatch(const std::string& subcommand, const RunConfig& cfg, const std::string& out_dir,
             int threads) {
    if (subcommand == "run") return run_single(cfg, out_dir);
    if (subcommand == "ensemble") return run_ensemble_cmd(cfg, out_dir, threads);
    if (subcommand == "picard") return run_picard_cmd(cfg, out_dir, threads);
    if (subcommand == "verify") return run_verify_cmd(cfg, out_dir, threads);
    if (subcommand == "oracle") return run_oracle_cmd(cfg, out_dir, threads);
    std::fprintf(stderr, "unknown subcommand: %s\n", subcommand.c_str());
    return 2;
}

}  // namespace snse
