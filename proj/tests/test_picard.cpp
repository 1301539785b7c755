// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "snse/field_gen.hpp"
#include "snse/picard.hpp"
#include "snse/spectral_ops.hpp"

using namespace snse;

namespace {

struct Lab {
    GridSpec g = GridSpec::cubic(8);
    CutoffConfig cut{0.2};
    double dt   = 1e-2;
    double T    = 0.5;
    StepperConfig cfg;
    NoisePath noise;

    explicit Lab(double eps_b, std::uint32_t substream = 0)
        : cfg(make_stepper_config(g, dt, StepMode::truncated,
                                  make_constant_transport({0.0, 0.0, eps_b}))),
          noise(sample_path(0xA11CE, substream, T, dt)) {}

    Trajectory zeros() const {
        return zero_trajectory(g, dt, noise.steps(), cfg.mode, cut.eps_bar);
    }
};

// independent evolution of the noise-only linear equation:
// u_{n+1} = e^{-|k|^2 dt} (u_n + dW P((b.grad)u_n))
Trajectory hand_linear_solve(const Lab& lab, const VectorField& u0) {
    FourierWorkspace ws(lab.g);
    Trajectory t = zero_trajectory(lab.g, lab.dt, lab.noise.steps(), lab.cfg.mode,
                                   lab.cut.eps_bar);
    VectorField u = leray_projected(u0);
    const auto m  = lab.g.modes();
    for (int n = 0; n <= lab.noise.steps(); ++n) {
        t.fields[static_cast<std::size_t>(n)] = u;
        t.h12sq[static_cast<std::size_t>(n)]  = sobolev_norm_sq(u, 0.5);
        t.h32sq[static_cast<std::size_t>(n)]  = sobolev_norm_sq(u, 1.5);
        t.diss[static_cast<std::size_t>(n)] =
            n == 0 ? 0.0
                   : t.diss[static_cast<std::size_t>(n) - 1] +
                         lab.dt * t.h32sq[static_cast<std::size_t>(n) - 1];
        if (n == lab.noise.steps()) break;
        VectorField gu = transport_term(lab.cfg.transport, u, ws);
        axpy(lab.noise.increments[static_cast<std::size_t>(n)], gu, u);
        for (int c = 0; c < 3; ++c) {
            auto comp = u.component(c);
            for (std::size_t idx = 0; idx < m; ++idx) {
                const auto k = lab.g.wave(idx);
                const double k_sq =
                    static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
                comp[idx] *= std::exp(-k_sq * lab.dt);
            }
        }
        leray_project(u);
    }
    return t;
}

}  // namespace

TEST_CASE("inner iteration: zero inputs and pure heat decay") {
    Lab lab(0.05);
    auto zero = lab.zeros();

    Trajectory z = inner_iteration(zero, zero, VectorField::zeros(lab.g), lab.noise, lab.cfg,
                                   lab.cut);
    for (double h : z.h12sq) CHECK(h == 0.0);

    VectorField shear = make_shear(lab.g, 0.05);
    Trajectory heatish = inner_iteration(zero, zero, shear, lab.noise, lab.cfg, lab.cut);
    Trajectory heat    = heat_trajectory(shear, lab.g, lab.dt, lab.noise.steps(),
                                         lab.cfg.mode, lab.cut.eps_bar);
    CHECK(sup_h12_difference(heatish, heat) <= 1e-14);
}

TEST_CASE("inner fixed point with b = 0 converges in exactly 2 iterations") {
    Lab lab(0.0);
    VectorField u0 = make_initial_data(lab.g, DataFamily::mixed, 0.05, 1, 0);
    auto res       = inner_fixed_point(lab.zeros(), u0, lab.noise, lab.cfg, lab.cut);
    CHECK(res.converged);
    CHECK(res.trace.iterations == 2);
    CHECK(res.trace.D[1] == 0.0);  // coupling is only through the noise
}

TEST_CASE("inner contraction ratio scales exactly quadratically in eps_b") {
    // freeze one advection trajectory v; sweep only the noise coupling
    Lab base(0.05);
    VectorField u0 = make_initial_data(base.g, DataFamily::mixed, 0.05, 2, 0);
    auto v         = run_path(u0, base.cfg, base.cut, base.noise);

    std::vector<double> ratio2;
    for (double eps_b : {0.025, 0.05, 0.1}) {
        Lab lab(eps_b);
        PicardSettings tight{50, 1e-14};
        auto res = inner_fixed_point(v, u0, lab.noise, lab.cfg, lab.cut, tight);
        REQUIRE(res.trace.iterations >= 3);
        ratio2.push_back(res.trace.ratio[2]);
    }
    // U^(m) is m-linear in b, so doubling eps_b multiplies D-ratios by 4;
    // the doubling is a power of two, so the scaling is close to exact.
    CHECK(ratio2[1] / ratio2[0] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(ratio2[2] / ratio2[1] == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(ratio2[0] < ratio2[1]);
    CHECK(ratio2[1] < ratio2[2]);
    CHECK(ratio2[2] < 1.0);
}

TEST_CASE("inner fixed point satisfies its own recursion (residual substitution)") {
    Lab lab(0.05);
    VectorField u0 = make_initial_data(lab.g, DataFamily::mixed, 0.05, 3, 0);
    auto v         = run_path(u0, lab.cfg, lab.cut, lab.noise);
    PicardSettings tight{50, 1e-13};
    auto res = inner_fixed_point(v, u0, lab.noise, lab.cfg, lab.cut, tight);
    REQUIRE(res.converged);
    // one more application of the iteration map must reproduce the output
    Trajectory once_more = inner_iteration(v, res.trajectory, u0, lab.noise, lab.cfg, lab.cut);
    CHECK(sup_h12_difference(once_more, res.trajectory) <= 1e-9);
}

TEST_CASE("outer scheme: trivial iterates") {
    Lab lab(0.05);
    auto res0 = outer_iteration(lab.zeros(), VectorField::zeros(lab.g), lab.noise, lab.cfg,
                                lab.cut);
    CHECK(trajectory_energy(res0.trajectory) == 0.0);

    // first iterate from u_prev = 0: heat + noise evolution, no advection
    VectorField u0 = make_initial_data(lab.g, DataFamily::mixed, 0.05, 4, 0);
    PicardSettings tight{50, 1e-14};
    auto res1 = outer_iteration(lab.zeros(), u0, lab.noise, lab.cfg, lab.cut, tight);
    REQUIRE(res1.converged);
    Trajectory hand = hand_linear_solve(lab, u0);
    CHECK(sup_h12_difference(res1.trajectory, hand) <= 1e-9);
}

TEST_CASE("outer fixed point coincides with the direct truncated trajectory") {
    Lab lab(0.05);
    VectorField u0 = make_initial_data(lab.g, DataFamily::mixed, 0.05, 5, 0);
    PicardSettings tight{50, 1e-13};
    auto res = outer_fixed_point(u0, lab.noise, lab.cfg, lab.cut, tight);
    REQUIRE(res.converged);
    Trajectory direct = run_path(u0, lab.cfg, lab.cut, lab.noise);
    CHECK(sup_h12_difference(res.trajectory, direct) <= 1e-8);

    // geometric decay of the outer differences
    const auto& d = res.trace.D;
    REQUIRE(d.size() >= 3);
    for (std::size_t m = 2; m < d.size(); ++m)
        if (d[m - 1] > 0.0) CHECK(d[m] < d[m - 1]);
}

TEST_CASE("outer contraction ratio shrinks when eps_bar and eps_b are halved") {
    // data large enough that the cutoff is active at the bigger eps_bar
    GridSpec g = GridSpec::cubic(8);
    auto u0    = make_initial_data(g, DataFamily::mixed, 0.1, 6, 0);
    auto noise = sample_path(0xBEEF, 0, 0.5, 1e-2);
    PicardSettings tight{50, 1e-12};

    auto ratio_at = [&](double eps_bar, double eps_b) {
        CutoffConfig cut{eps_bar};
        auto cfg = make_stepper_config(g, 1e-2, StepMode::truncated,
                                       make_constant_transport({0.0, 0.0, eps_b}));
        auto res = outer_fixed_point(u0, noise, cfg, cut, tight);
        REQUIRE(res.converged);
        REQUIRE(res.trace.iterations >= 3);
        return res.trace.ratio[2];
    };
    const double big   = ratio_at(0.12, 0.2);
    const double small = ratio_at(0.06, 0.1);
    CHECK(small < big);
}

TEST_CASE("pathwise uniqueness: three-way agreement") {
    Lab lab(0.05);
    PicardSettings tight{50, 1e-13};

    auto zero_rep = pathwise_uniqueness_check(VectorField::zeros(lab.g), lab.noise, lab.cfg,
                                              lab.cut, tight);
    CHECK(zero_rep.worst() == 0.0);

    VectorField u0 = make_initial_data(lab.g, DataFamily::mixed, 0.05, 7, 0);
    auto rep       = pathwise_uniqueness_check(u0, lab.noise, lab.cfg, lab.cut, tight);
    CHECK(rep.converged);
    CHECK(rep.diff_between_seeds <= 1e-8);
    CHECK(rep.diff_zero_vs_direct <= 1e-8);
    CHECK(rep.diff_heat_vs_direct <= 1e-8);
}

TEST_CASE("non-convergence carries the trace instead of throwing") {
    Lab lab(0.05);
    VectorField u0 = make_initial_data(lab.g, DataFamily::mixed, 0.05, 8, 0);
    PicardSettings starved{2, 1e-16};
    auto v   = run_path(u0, lab.cfg, lab.cut, lab.noise);
    auto res = inner_fixed_point(v, u0, lab.noise, lab.cfg, lab.cut, starved);
    CHECK_FALSE(res.converged);
    CHECK(res.trace.iterations == 2);
    CHECK(res.trace.D.size() == 2);
    CHECK(trajectory_energy(res.trajectory) > 0.0);
}

TEST_CASE("grid and step mismatches are rejected") {
    Lab lab(0.05);
    auto wrong_noise = sample_path(1, 0, 0.5, 5e-3);
    CHECK_THROWS_AS(inner_fixed_point(lab.zeros(), VectorField::zeros(lab.g), wrong_noise,
                                      lab.cfg, lab.cut),
                    std::invalid_argument);
}
