// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "snse/field_gen.hpp"
#include "snse/spectral_ops.hpp"
#include "snse/stepper.hpp"

using namespace snse;

TEST_CASE("theta: plateau, support, midpoint, monotone C1") {
    CHECK(theta_eval(0.0) == 1.0);
    CHECK(theta_eval(1.0) == 1.0);
    CHECK(theta_eval(2.0) == 1.0);
    CHECK(theta_eval(3.0) == 0.0);
    CHECK(theta_eval(3.5) == 0.0);
    CHECK(theta_eval(2.5) == doctest::Approx(0.5).epsilon(1e-15));

    double prev = 1.0;
    for (int i = 1; i <= 1000; ++i) {
        const double x = 2.0 + 1e-3 * i;
        const double v = theta_eval(x);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    // C1 join: one-sided difference quotients vanish at both ends
    const double h = 1e-6;
    CHECK(std::abs(theta_eval(2.0 + h) - 1.0) / h <= 1e-5);
    CHECK(std::abs(theta_eval(3.0 - h) - 0.0) / h <= 1e-5);
}

TEST_CASE("psi: zero state, beyond-support state, plateau guarantee") {
    CutoffConfig cut{0.2};
    CHECK(psi_eval(0.0, 0.0, cut) == 1.0);
    CHECK(psi_eval(4.0 * cut.eps_bar, 0.0, cut) == 0.0);
    // argument <= 2 whenever |u|_{H^{1/2}} + sqrt(I) <= 2 eps_bar
    for (double frac : {0.1, 0.5, 1.0}) {
        const double h12 = frac * cut.eps_bar;
        const double i   = (2.0 * cut.eps_bar - h12) * (2.0 * cut.eps_bar - h12);
        CHECK(psi_argument(h12, i, cut.eps_bar) <= 2.0 + 1e-15);
        CHECK(psi_eval(h12, i, cut) == 1.0);
    }
}

TEST_CASE("pure heat decay is exact for shear data with b = 0") {
    GridSpec g = GridSpec::cubic(8);
    auto cfg   = make_stepper_config(g, 1e-3, StepMode::truncated,
                                     make_constant_transport({0.0, 0.0, 0.0}));
    CutoffConfig cut{0.2};
    const double amp = 0.05;
    auto noise       = sample_path(7, 0, 1.0, 1e-3);
    auto traj        = run_path(make_shear(g, amp), cfg, cut, noise);
    REQUIRE(traj.steps() == 1000);

    const Complex expected = (amp / 2.0) * std::exp(-1.0);
    const Complex got      = traj.fields.back().at(0, 0, 0, 1);
    CHECK(std::abs(got - expected) <= 1e-12 * std::abs(expected));

    // per-step the amplitude is exactly e^{-n dt} times the initial value
    const Complex mid = traj.fields[250].at(0, 0, 0, 1);
    CHECK(std::abs(mid - (amp / 2.0) * std::exp(-0.25)) <= 1e-12 * amp);
}

TEST_CASE("zero initial data is invariant") {
    GridSpec g = GridSpec::cubic(8);
    auto cfg   = make_stepper_config(g, 1e-2, StepMode::truncated,
                                     make_constant_transport({0.0, 0.0, 0.1}));
    CutoffConfig cut{0.2};
    auto noise = sample_path(3, 0, 1.0, 1e-2);
    auto traj  = run_path(VectorField::zeros(g), cfg, cut, noise);
    CHECK_FALSE(traj.stopped);
    for (int n = 0; n <= traj.steps(); ++n) CHECK(traj.q_sq(n) == 0.0);
}

TEST_CASE("exact shear solution: heat limit, t = 0, modulus independent of W") {
    const Complex a{0.3, -0.1};
    CHECK(exact_shear_solution(a, 2, 0.0, 0.7, 1.23) ==
          a * std::exp(Complex{-4.0 * 0.7, 0.0}));
    CHECK(exact_shear_solution(a, 3, 0.4, 0.0, 0.0) == a);
    const double mod1 = std::abs(exact_shear_solution(a, 1, 0.2, 0.5, -4.0));
    const double mod2 = std::abs(exact_shear_solution(a, 1, 0.2, 0.5, 11.0));
    CHECK(mod1 == doctest::Approx(mod2).epsilon(1e-13));
    CHECK(mod1 == doctest::Approx(std::abs(a) * std::exp((-1.0 + 0.02) * 0.5)).epsilon(1e-13));
}

TEST_CASE("stochastic shear trajectory follows the per-mode geometric SDE") {
    GridSpec g        = GridSpec::cubic(8);
    const double beta = 0.1;
    CutoffConfig cut{0.5};

    // strong error at the endpoint decays ~ sqrt(dt)
    double rms_coarse = 0.0, rms_fine = 0.0;
    const int paths = 200;
    for (int level = 0; level < 2; ++level) {
        const double dt = level == 0 ? 1.0 / 64.0 : 1.0 / 256.0;
        auto cfg = make_stepper_config(g, dt, StepMode::raw,
                                       make_constant_transport({0.0, 0.0, beta}));
        double sum_sq = 0.0;
        for (int p = 0; p < paths; ++p) {
            auto noise = sample_path(11, static_cast<std::uint32_t>(p), 1.0, dt);
            auto traj  = run_path(make_shear(g, 0.1), cfg, cut, noise);
            const Complex exact =
                exact_shear_solution(Complex{0.05, 0.0}, 1, beta, 1.0, noise.sum());
            const Complex got = traj.fields.back().at(0, 0, 0, 1);
            sum_sq += std::norm(got - exact);
        }
        (level == 0 ? rms_coarse : rms_fine) = std::sqrt(sum_sq / paths);
    }
    // dt shrinks by 4: strong order 1/2 predicts a factor 2
    const double ratio = rms_coarse / rms_fine;
    CHECK(ratio > 1.4);
    CHECK(ratio < 2.9);
}

TEST_CASE("truncated and raw trajectories are bit-identical until the cutoff engages") {
    GridSpec g = GridSpec::cubic(8);
    // eps_bar chosen so the cutoff argument crosses 2 partway along the path
    CutoffConfig cut{0.0125};
    auto transport = make_constant_transport({0.0, 0.0, 0.1});
    auto cfg_trunc = make_stepper_config(g, 1e-2, StepMode::truncated, transport);
    auto cfg_raw   = make_stepper_config(g, 1e-2, StepMode::raw, transport);

    int crossings = 0;
    for (std::uint32_t s = 0; s < 10; ++s) {
        auto u0    = make_initial_data(g, DataFamily::mixed, 0.02, 17, s);
        auto noise = sample_path(17, s, 2.0, 1e-2);
        auto a     = run_path(u0, cfg_trunc, cut, noise);
        auto b     = run_path(u0, cfg_raw, cut, noise);

        int first_beyond = a.steps() + 1;
        for (int n = 0; n <= a.steps(); ++n) {
            if (a.psi_argument_at(n) > 2.0) {
                first_beyond = n;
                break;
            }
        }
        if (first_beyond <= a.steps()) ++crossings;
        for (int n = 0; n <= std::min(first_beyond, a.steps()); ++n) {
            const bool same = std::memcmp(a.fields[static_cast<std::size_t>(n)].data.data(),
                                          b.fields[static_cast<std::size_t>(n)].data.data(),
                                          a.fields[0].data.size() * sizeof(Complex)) == 0;
            CHECK(same);
        }
    }
    CHECK(crossings > 0);  // the comparison must not be vacuous
}

TEST_CASE("stopping: flag at first exceedance, pre-flag bound, state invariants") {
    GridSpec g = GridSpec::cubic(8);
    CutoffConfig cut{0.021};
    // transport noise pumps energy only at second order, so stops need a
    // sizable beta when eps_bar sits just above the data norm
    auto cfg = make_stepper_config(g, 1e-2, StepMode::truncated,
                                   make_constant_transport({0.0, 0.0, 0.6}));
    int stopped_paths = 0;
    for (std::uint32_t s = 0; s < 20; ++s) {
        auto u0    = make_initial_data(g, DataFamily::mixed, 0.02, 23, s);
        auto noise = sample_path(23, s, 4.0, 1e-2);
        auto traj  = run_path(u0, cfg, cut, noise);

        bool flagged = false;
        for (int n = 0; n <= traj.steps(); ++n) {
            const double q_sq = traj.q_sq(n);
            if (!flagged && q_sq > cut.eps_bar * cut.eps_bar) {
                flagged = true;
                CHECK(traj.stopped);
                CHECK(traj.tau == doctest::Approx(n * cfg.dt).epsilon(1e-12));
            }
            if (!flagged) CHECK(q_sq <= cut.eps_bar * cut.eps_bar);
        }
        if (traj.stopped) {
            ++stopped_paths;
            CHECK(flagged);
        }

        // psi support shadow: the advection is fully off exactly when the
        // cutoff argument reaches 3
        for (int n = 0; n < traj.steps(); ++n) {
            const double arg = traj.psi_argument_at(n);
            const double psi = traj.records[static_cast<std::size_t>(n)].psi;
            CHECK((psi == 0.0) == (arg >= 3.0));
            if (arg <= 2.0) CHECK(psi == 1.0);
        }

        // divergence/average-free and Q-recompute invariants along the path
        for (int n : {0, traj.steps() / 2, traj.steps()}) {
            const auto& f = traj.fields[static_cast<std::size_t>(n)];
            CHECK(divergence_defect(f) <= 1e-10);
            CHECK(std::abs(f.at(0, 0, 0, 0)) == 0.0);
            const double recomputed = sobolev_norm_sq(f, 0.5) + traj.diss[static_cast<std::size_t>(n)];
            CHECK(recomputed == doctest::Approx(traj.q_sq(n)).epsilon(1e-12));
        }
    }
    CHECK(stopped_paths > 0);
}

TEST_CASE("zero-noise discrete energy decay") {
    GridSpec g = GridSpec::cubic(8);
    CutoffConfig cut{1.0};
    auto cfg = make_stepper_config(g, 1e-3, StepMode::raw,
                                   make_constant_transport({0.0, 0.0, 0.0}));
    auto u0    = make_initial_data(g, DataFamily::mixed, 0.3, 31, 0);
    auto noise = sample_path(31, 0, 0.5, 1e-3);
    auto traj  = run_path(u0, cfg, cut, noise);
    FourierWorkspace ws(g);
    for (int n = 0; n < traj.steps(); n += 25) {
        const auto& now  = traj.fields[static_cast<std::size_t>(n)];
        const auto& next = traj.fields[static_cast<std::size_t>(n) + 1];
        VectorField f    = nonlinear_term(now, now, ws);
        const double slack =
            cfg.dt * cfg.dt * sobolev_norm_sq(f, 0.0) + 1e-12 * sobolev_norm_sq(now, 0.0);
        CHECK(sobolev_norm_sq(next, 0.0) <= sobolev_norm_sq(now, 0.0) + slack);
    }
}

TEST_CASE("overflow is flagged as diverged, not stopped") {
    GridSpec g = GridSpec::cubic(8);
    CutoffConfig cut{100.0};  // keep the advection on
    auto cfg = make_stepper_config(g, 0.4, StepMode::raw,
                                   make_constant_transport({0.0, 0.0, 0.0}));
    const CounterRng rng(0x5eedULL, 0, DrawPurpose::initial_data);
    VectorField u0 = random_divfree_field(g, rng, 2);
    u0 *= 40.0 / sobolev_norm(u0, 0.5);
    auto noise = sample_path(5, 0, 80.0, 0.4);
    auto traj  = run_path(u0, cfg, cut, noise);
    CHECK(traj.diverged);
    CHECK(traj.steps() < noise.steps());  // integration halted at the blow-up
}

TEST_CASE("configuration guards") {
    GridSpec g = GridSpec::cubic(16);
    auto b     = make_constant_transport({0.0, 0.0, 0.5});
    CHECK_THROWS_AS(make_stepper_config(g, 0.45, StepMode::raw, b), std::invalid_argument);
    CHECK_NOTHROW(make_stepper_config(g, 0.05, StepMode::raw, b));

    auto cfg = make_stepper_config(g, 1e-2, StepMode::truncated, b);
    CutoffConfig cut{0.2};
    auto noise = sample_path(1, 0, 1.0, 1e-3);  // wrong dt
    CHECK_THROWS_AS(run_path(VectorField::zeros(g), cfg, cut, noise), std::invalid_argument);

    PathStepper st(cfg, cut);
    VectorField bad(g);
    bad.at(0, 1, 0, 0)  = Complex{1.0, 0.0};
    bad.at(0, -1, 0, 0) = Complex{1.0, 0.0};
    CHECK_THROWS_AS(st.initial_state(bad), std::invalid_argument);
}

TEST_CASE("heat trajectory agrees with the stepper on shear data") {
    GridSpec g = GridSpec::cubic(8);
    CutoffConfig cut{0.5};
    auto cfg = make_stepper_config(g, 1e-2, StepMode::truncated,
                                   make_constant_transport({0.0, 0.0, 0.0}));
    auto u0    = make_shear(g, 0.1);
    auto noise = sample_path(2, 0, 1.0, 1e-2);
    auto traj  = run_path(u0, cfg, cut, noise);
    auto heat  = heat_trajectory(u0, g, 1e-2, 100, StepMode::truncated, cut.eps_bar);
    REQUIRE(heat.fields.size() == traj.fields.size());
    for (int n = 0; n <= 100; n += 20) {
        VectorField d = traj.fields[static_cast<std::size_t>(n)];
        d -= heat.fields[static_cast<std::size_t>(n)];
        CHECK(sobolev_norm(d, 0.5) <= 1e-14);
        CHECK(heat.h12sq[static_cast<std::size_t>(n)] ==
              doctest::Approx(traj.h12sq[static_cast<std::size_t>(n)]).epsilon(1e-12));
    }
}
