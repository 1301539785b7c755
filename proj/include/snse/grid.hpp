// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace snse {

/// Fourier lattice of a periodic cubic box with period 2*pi per axis.
/// The collocation grid has `n` points per axis; the retained (dealiased)
/// modes are the cube {k : |k_i| <= kd} with kd = floor(n/3) (2/3 rule).
struct GridSpec {
    int n  = 0;
    int kd = 0;

    static GridSpec cubic(int modes_per_axis) {
        if (modes_per_axis < 4)
            throw std::invalid_argument("GridSpec: modes_per_axis must be >= 4, got " +
                                        std::to_string(modes_per_axis));
        if (modes_per_axis % 2 != 0)
            throw std::invalid_argument("GridSpec: modes_per_axis must be even, got " +
                                        std::to_string(modes_per_axis));
        GridSpec g;
        g.n  = modes_per_axis;
        g.kd = modes_per_axis / 3;
        return g;
    }

    int side() const { return 2 * kd + 1; }

    std::size_t modes() const {
        const std::size_t s = static_cast<std::size_t>(side());
        return s * s * s;
    }

    bool contains(int k1, int k2, int k3) const {
        return k1 >= -kd && k1 <= kd && k2 >= -kd && k2 <= kd && k3 >= -kd && k3 <= kd;
    }

    std::size_t index(int k1, int k2, int k3) const {
        const int s = side();
        return (static_cast<std::size_t>(k1 + kd) * s + static_cast<std::size_t>(k2 + kd)) * s +
               static_cast<std::size_t>(k3 + kd);
    }

    std::array<int, 3> wave(std::size_t idx) const {
        const int s  = side();
        const int k3 = static_cast<int>(idx % s) - kd;
        const int k2 = static_cast<int>((idx / s) % s) - kd;
        const int k1 = static_cast<int>(idx / (static_cast<std::size_t>(s) * s)) - kd;
        return {k1, k2, k3};
    }

    bool operator==(const GridSpec&) const = default;
};

}  // namespace snse
