// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "snse/rng.hpp"

using namespace snse;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors from the Random123 test suite.
    const auto zero = philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(zero[0] == 0x6627e8d5u);
    CHECK(zero[1] == 0xe169c58du);
    CHECK(zero[2] == 0xbc57ac4cu);
    CHECK(zero[3] == 0x9b00dbd8u);

    const auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu});
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("counter rng is a pure function of (seed, substream, purpose, index)") {
    const CounterRng a(42, 7, DrawPurpose::noise_increment);
    const CounterRng b(42, 7, DrawPurpose::noise_increment);
    for (std::uint64_t i = 0; i < 100; ++i) {
        CHECK(a.bits(i) == b.bits(i));
        CHECK(a.gaussian(i) == b.gaussian(i));
    }
    const CounterRng other_stream(42, 8, DrawPurpose::noise_increment);
    const CounterRng other_purpose(42, 7, DrawPurpose::initial_data);
    bool all_same_stream = true, all_same_purpose = true;
    for (std::uint64_t i = 0; i < 100; ++i) {
        all_same_stream &= (a.bits(i) == other_stream.bits(i));
        all_same_purpose &= (a.bits(i) == other_purpose.bits(i));
    }
    CHECK_FALSE(all_same_stream);
    CHECK_FALSE(all_same_purpose);
}

TEST_CASE("noise path: determinism and i.i.d. N(0, dt) statistics") {
    const double dt = 1e-3;
    const int n     = 1'000'000;
    NoisePath path  = sample_path(0xABCDEF01ULL, 0, n * dt, dt);
    NoisePath again = sample_path(0xABCDEF01ULL, 0, n * dt, dt);
    REQUIRE(path.steps() == n);
    CHECK(std::memcmp(path.increments.data(), again.increments.data(),
                      sizeof(double) * path.increments.size()) == 0);

    double mean = 0.0;
    for (double w : path.increments) mean += w;
    mean /= n;
    // CLT: sd of the sample mean is sqrt(dt/n)
    CHECK(std::abs(mean) <= 4.0 * std::sqrt(dt / n));

    double var = 0.0;
    for (double w : path.increments) var += (w - mean) * (w - mean);
    var /= (n - 1);
    // chi-square concentration: relative sd of the sample variance ~ sqrt(2/n)
    CHECK(var == doctest::Approx(dt).epsilon(0.02));
}

TEST_CASE("substreams are empirically uncorrelated") {
    const double dt = 1.0;
    const int n     = 100'000;
    NoisePath p0    = sample_path(2026, 0, n * dt, dt);
    NoisePath p1    = sample_path(2026, 1, n * dt, dt);
    double m0 = 0.0, m1 = 0.0;
    for (int i = 0; i < n; ++i) {
        m0 += p0.increments[i];
        m1 += p1.increments[i];
    }
    m0 /= n;
    m1 /= n;
    double cov = 0.0, v0 = 0.0, v1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = p0.increments[i] - m0;
        const double b = p1.increments[i] - m1;
        cov += a * b;
        v0 += a * a;
        v1 += b * b;
    }
    const double corr = cov / std::sqrt(v0 * v1);
    CHECK(std::abs(corr) <= 0.01);
}

TEST_CASE("non-integral horizon/dt is rejected") {
    CHECK_THROWS_AS(sample_path(1, 0, 1.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(step_count(-1.0, 0.1), std::invalid_argument);
    CHECK(step_count(1.0, 1e-3) == 1000);
    CHECK(step_count(0.0625, 5e-4) == 125);
}

TEST_CASE("antithetic path flips every increment") {
    NoisePath p = sample_path(99, 3, 1.0, 0.25);
    NoisePath q = p.antithetic();
    for (int i = 0; i < p.steps(); ++i) CHECK(q.increments[i] == -p.increments[i]);
    CHECK(q.sum() == -p.sum());
}
