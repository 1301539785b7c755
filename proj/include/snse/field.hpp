// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "snse/grid.hpp"

namespace snse {

using Complex = std::complex<double>;

/// Truncated Fourier representation of a 3-component velocity field on the
/// torus. Coefficients are stored component-major over the retained mode
/// cube; the normalization is fixed so that the squared L2 norm equals the
/// plain coefficient sum |u|_{L2}^2 = sum_k |u_hat(k)|^2.
struct VectorField {
    GridSpec grid;
    std::vector<Complex> data;  // 3 * grid.modes(), component-major

    VectorField() = default;
    explicit VectorField(GridSpec g) : grid(g), data(3 * g.modes(), Complex{0.0, 0.0}) {}

    static VectorField zeros(GridSpec g) { return VectorField(g); }

    std::span<Complex> component(int c) {
        return {data.data() + static_cast<std::size_t>(c) * grid.modes(), grid.modes()};
    }
    std::span<const Complex> component(int c) const {
        return {data.data() + static_cast<std::size_t>(c) * grid.modes(), grid.modes()};
    }

    Complex& at(int c, int k1, int k2, int k3) {
        return data[static_cast<std::size_t>(c) * grid.modes() + grid.index(k1, k2, k3)];
    }
    Complex at(int c, int k1, int k2, int k3) const {
        return data[static_cast<std::size_t>(c) * grid.modes() + grid.index(k1, k2, k3)];
    }

    VectorField& operator+=(const VectorField& other) {
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += other.data[i];
        return *this;
    }
    VectorField& operator-=(const VectorField& other) {
        for (std::size_t i = 0; i < data.size(); ++i) data[i] -= other.data[i];
        return *this;
    }
    VectorField& operator*=(double a) {
        for (auto& v : data) v *= a;
        return *this;
    }

    friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
    friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
    friend VectorField operator*(double a, VectorField u) { return u *= a; }
};

inline void axpy(double a, const VectorField& x, VectorField& y) {
    for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += a * x.data[i];
}

}  // namespace snse
