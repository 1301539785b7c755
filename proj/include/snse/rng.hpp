// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace snse {

/// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3"). Stateless: each 128-bit counter block is
/// mixed independently under a 64-bit key, so any (seed, substream, purpose,
/// index) tuple can be evaluated in any order on any thread with identical
/// results.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

/// Draw purposes keep independent substreams from ever sharing a counter.
enum class DrawPurpose : std::uint32_t {
    noise_increment = 0,
    initial_data    = 1,
};

/// One logical random stream: a pure function of (seed, substream, purpose).
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint32_t substream, DrawPurpose purpose)
        : seed_(seed), substream_(substream), purpose_(static_cast<std::uint32_t>(purpose)) {}

    /// Uniform 64-bit word at position `index`.
    std::uint64_t bits(std::uint64_t index) const;

    /// Uniform double in (0,1] at position `index` (53-bit resolution).
    double uniform(std::uint64_t index) const;

    /// Standard normal draw at position `index` (Box-Muller on one block).
    double gaussian(std::uint64_t index) const;

  private:
    std::array<std::uint32_t, 4> block(std::uint64_t index) const;
    std::uint64_t seed_;
    std::uint32_t substream_;
    std::uint32_t purpose_;
};

/// Discretized Brownian path: increments[i] ~ N(0, dt), reproducible from
/// (base_seed, substream_id) alone.
struct NoisePath {
    double dt = 0.0;
    std::vector<double> increments;
    std::uint64_t base_seed   = 0;
    std::uint32_t substream_id = 0;

    int steps() const { return static_cast<int>(increments.size()); }
    double horizon() const { return dt * static_cast<double>(increments.size()); }
    double sum() const;

    NoisePath antithetic() const;
};

/// Number of steps in [0,T] with step dt; throws unless T/dt is integral
/// (to 1e-9 relative).
int step_count(double horizon, double dt);

NoisePath sample_path(std::uint64_t base_seed, std::uint32_t substream_id, double horizon,
                      double dt);

}  // namespace snse
