// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace snse {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0    = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1    = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        philox_round(c, k);
    }
    return c;
}

std::array<std::uint32_t, 4> CounterRng::block(std::uint64_t index) const {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(index),
        static_cast<std::uint32_t>(index >> 32),
        substream_,
        purpose_,
    };
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed_),
        static_cast<std::uint32_t>(seed_ >> 32),
    };
    return philox4x32(counter, key);
}

std::uint64_t CounterRng::bits(std::uint64_t index) const {
    const auto r = block(index);
    return (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
}

double CounterRng::uniform(std::uint64_t index) const {
    const std::uint64_t x = bits(index) >> 11;  // 53 bits
    return (static_cast<double>(x) + 1.0) * 0x1.0p-53;
}

double CounterRng::gaussian(std::uint64_t index) const {
    const auto r = block(index);
    const std::uint64_t a =
        ((static_cast<std::uint64_t>(r[0]) << 32) | r[1]) >> 11;  // 53 bits
    const std::uint64_t b =
        ((static_cast<std::uint64_t>(r[2]) << 32) | r[3]) >> 11;
    const double u1 = (static_cast<double>(a) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(b) * 0x1.0p-53;          // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double NoisePath::sum() const {
    double s = 0.0;
    for (double w : increments) s += w;
    return s;
}

NoisePath NoisePath::antithetic() const {
    NoisePath flipped = *this;
    for (double& w : flipped.increments) w = -w;
    return flipped;
}

int step_count(double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("step_count: horizon and dt must be positive");
    const double ratio = horizon / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio)
        throw std::invalid_argument("step_count: horizon/dt is not an integer (T=" +
                                    std::to_string(horizon) + ", dt=" + std::to_string(dt) + ")");
    return static_cast<int>(rounded);
}

NoisePath sample_path(std::uint64_t base_seed, std::uint32_t substream_id, double horizon,
                      double dt) {
    const int n = step_count(horizon, dt);
    NoisePath path;
    path.dt           = dt;
    path.base_seed    = base_seed;
    path.substream_id = substream_id;
    path.increments.resize(static_cast<std::size_t>(n));
    const CounterRng rng(base_seed, substream_id, DrawPurpose::noise_increment);
    const double scale = std::sqrt(dt);
    for (int i = 0; i < n; ++i)
        path.increments[static_cast<std::size_t>(i)] = scale * rng.gaussian(static_cast<std::uint64_t>(i));
    return path;
}

}  // namespace snse
