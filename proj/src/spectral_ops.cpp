// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/spectral_ops.hpp"

#include <algorithm>
#include <stdexcept>

namespace snse {

void leray_project(VectorField& u) {
    const GridSpec g = u.grid;
    const auto m     = g.modes();
    Complex* c0      = u.component(0).data();
    Complex* c1      = u.component(1).data();
    Complex* c2      = u.component(2).data();
    for (std::size_t idx = 0; idx < m; ++idx) {
        const auto k   = g.wave(idx);
        const double k_sq = static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        if (k_sq == 0.0) {
            c0[idx] = c1[idx] = c2[idx] = Complex{0.0, 0.0};
            continue;
        }
        const Complex kd = (static_cast<double>(k[0]) * c0[idx] +
                            static_cast<double>(k[1]) * c1[idx] +
                            static_cast<double>(k[2]) * c2[idx]) /
                           k_sq;
        c0[idx] -= static_cast<double>(k[0]) * kd;
        c1[idx] -= static_cast<double>(k[1]) * kd;
        c2[idx] -= static_cast<double>(k[2]) * kd;
    }
}

VectorField leray_projected(VectorField u) {
    leray_project(u);
    return u;
}

double sobolev_norm_sq(const VectorField& u, double s) {
    const GridSpec g = u.grid;
    const auto m     = g.modes();
    double sum       = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto comp = u.component(c);
        for (std::size_t idx = 0; idx < m; ++idx) {
            const auto k      = g.wave(idx);
            const double k_sq = static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
            sum += bessel_weight(k_sq, s) * std::norm(comp[idx]);
        }
    }
    return sum;
}

double sobolev_norm(const VectorField& u, double s) { return std::sqrt(sobolev_norm_sq(u, s)); }

double hermitian_defect(const VectorField& u) {
    const GridSpec g = u.grid;
    double max_abs = 0.0, max_defect = 0.0;
    for (int c = 0; c < 3; ++c) {
        const auto comp = u.component(c);
        for (std::size_t idx = 0; idx < g.modes(); ++idx) {
            const auto k = g.wave(idx);
            const Complex a = comp[idx];
            const Complex b = comp[g.index(-k[0], -k[1], -k[2])];
            max_abs    = std::max(max_abs, std::abs(a));
            max_defect = std::max(max_defect, std::abs(b - std::conj(a)));
        }
    }
    return max_abs > 0.0 ? max_defect / max_abs : 0.0;
}

double divergence_defect(const VectorField& u) {
    const GridSpec g = u.grid;
    double worst     = 0.0;
    const auto c0 = u.component(0), c1 = u.component(1), c2 = u.component(2);
    for (std::size_t idx = 0; idx < g.modes(); ++idx) {
        const auto k       = g.wave(idx);
        const Complex dot  = static_cast<double>(k[0]) * c0[idx] +
                             static_cast<double>(k[1]) * c1[idx] +
                             static_cast<double>(k[2]) * c2[idx];
        const double mag = std::sqrt(std::norm(c0[idx]) + std::norm(c1[idx]) + std::norm(c2[idx]));
        if (mag > 0.0) worst = std::max(worst, std::abs(dot) / mag);
    }
    return worst;
}

namespace {

void require_same_grid(const VectorField& u, const VectorField& v) {
    if (!(u.grid == v.grid)) throw std::invalid_argument("mismatched grids");
}

// Accumulate i k_j (prod)^hat into component cubes out_i (and out_j when
// symmetric products are shared between two components).
void add_divergence_term(const GridSpec& g, std::span<const Complex> prod, int deriv_axis,
                         std::span<Complex> out) {
    for (std::size_t idx = 0; idx < g.modes(); ++idx) {
        const auto k = g.wave(idx);
        out[idx] += Complex{0.0, static_cast<double>(k[deriv_axis])} * prod[idx];
    }
}

}  // namespace

void self_tensor_divergence_into(const VectorField& u, FourierWorkspace& ws, VectorField& out,
                                 std::vector<Complex>& scratch) {
    const GridSpec g    = u.grid;
    const std::size_t p = static_cast<std::size_t>(g.n) * g.n * g.n;
    scratch.resize(g.modes());
    if (!(out.grid == g)) out = VectorField(g);
    std::fill(out.data.begin(), out.data.end(), Complex{0.0, 0.0});

    double* pu[3] = {ws.phys(0), ws.phys(1), ws.phys(2)};
    for (int c = 0; c < 3; ++c) ws.cube_to_physical(u.component(c), pu[c]);

    double* work = ws.phys(6);
    // u_i u_j is symmetric: six collocation products feed both slots.
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            for (std::size_t x = 0; x < p; ++x) work[x] = pu[i][x] * pu[j][x];
            ws.physical_to_cube(work, scratch);
            add_divergence_term(g, scratch, j, out.component(i));
            if (j != i) add_divergence_term(g, scratch, i, out.component(j));
        }
    }
}

VectorField tensor_divergence(const VectorField& u, const VectorField& v, FourierWorkspace& ws) {
    require_same_grid(u, v);
    if (!(u.grid == ws.grid())) throw std::invalid_argument("workspace grid mismatch");
    const GridSpec g    = u.grid;
    const std::size_t p = static_cast<std::size_t>(g.n) * g.n * g.n;

    VectorField out(g);
    std::vector<Complex> prod(g.modes());
    if (&u == &v || u.data == v.data) {
        self_tensor_divergence_into(u, ws, out, prod);
        return out;
    }

    double* pu[3] = {ws.phys(0), ws.phys(1), ws.phys(2)};
    double* pv[3] = {ws.phys(3), ws.phys(4), ws.phys(5)};
    for (int c = 0; c < 3; ++c) ws.cube_to_physical(u.component(c), pu[c]);
    for (int c = 0; c < 3; ++c) ws.cube_to_physical(v.component(c), pv[c]);

    double* work = ws.phys(6);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (std::size_t x = 0; x < p; ++x) work[x] = pu[i][x] * pv[j][x];
            ws.physical_to_cube(work, prod);
            add_divergence_term(g, prod, j, out.component(i));
        }
    }
    return out;
}

VectorField nonlinear_term(const VectorField& u, const VectorField& v, FourierWorkspace& ws) {
    VectorField out = tensor_divergence(u, v, ws);
    leray_project(out);
    return out;
}

VectorField nonlinear_term(const VectorField& u, const VectorField& v) {
    FourierWorkspace ws(u.grid);
    return nonlinear_term(u, v, ws);
}

VectorField advect_constant(const std::array<double, 3>& b, const VectorField& u) {
    const GridSpec g = u.grid;
    VectorField out(g);
    for (int c = 0; c < 3; ++c) {
        const auto in = u.component(c);
        auto dst      = out.component(c);
        for (std::size_t idx = 0; idx < g.modes(); ++idx) {
            const auto k    = g.wave(idx);
            const double bk = b[0] * k[0] + b[1] * k[1] + b[2] * k[2];
            dst[idx]        = Complex{0.0, bk} * in[idx];
        }
    }
    return out;
}

VectorField advect_field(const VectorField& b, const VectorField& u, FourierWorkspace& ws) {
    require_same_grid(b, u);
    const GridSpec g    = u.grid;
    const std::size_t p = static_cast<std::size_t>(g.n) * g.n * g.n;

    double* pb[3] = {ws.phys(0), ws.phys(1), ws.phys(2)};
    for (int c = 0; c < 3; ++c) ws.cube_to_physical(b.component(c), pb[c]);

    VectorField out(g);
    std::vector<Complex> grad(g.modes());
    double* pgrad = ws.phys(3);
    double* acc   = ws.phys(4);
    for (int i = 0; i < 3; ++i) {
        for (std::size_t x = 0; x < p; ++x) acc[x] = 0.0;
        for (int j = 0; j < 3; ++j) {
            const auto comp = u.component(i);
            for (std::size_t idx = 0; idx < g.modes(); ++idx) {
                const auto k = g.wave(idx);
                grad[idx]    = Complex{0.0, static_cast<double>(k[j])} * comp[idx];
            }
            ws.cube_to_physical(grad, pgrad);
            for (std::size_t x = 0; x < p; ++x) acc[x] += pb[j][x] * pgrad[x];
        }
        ws.physical_to_cube(acc, out.component(i));
    }
    return out;
}

double product_inequality_ratio(const VectorField& u, const VectorField& v,
                                FourierWorkspace& ws) {
    require_same_grid(u, v);
    const double nu12 = sobolev_norm(u, 0.5), nu32 = sobolev_norm(u, 1.5);
    const double nv12 = sobolev_norm(v, 0.5), nv32 = sobolev_norm(v, 1.5);
    if (nu12 == 0.0 || nv12 == 0.0)
        throw std::invalid_argument("product_inequality_ratio: zero input field");

    const GridSpec g    = u.grid;
    const std::size_t p = static_cast<std::size_t>(g.n) * g.n * g.n;
    double* pu[3]       = {ws.phys(0), ws.phys(1), ws.phys(2)};
    double* pv[3]       = {ws.phys(3), ws.phys(4), ws.phys(5)};
    for (int c = 0; c < 3; ++c) ws.cube_to_physical(u.component(c), pu[c]);
    for (int c = 0; c < 3; ++c) ws.cube_to_physical(v.component(c), pv[c]);

    double tensor_sq = 0.0;
    std::vector<Complex> prod(g.modes());
    double* work = ws.phys(6);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (std::size_t x = 0; x < p; ++x) work[x] = pu[i][x] * pv[j][x];
            ws.physical_to_cube(work, prod);
            for (std::size_t idx = 0; idx < g.modes(); ++idx) {
                const auto k      = g.wave(idx);
                const double k_sq = static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
                tensor_sq += bessel_weight(k_sq, 0.5) * std::norm(prod[idx]);
            }
        }
    }
    return std::sqrt(tensor_sq) / (nu12 * nv32 + nv12 * nu32);
}

std::vector<Complex> convolve_scalar(const GridSpec& g, std::span<const Complex> a,
                                     std::span<const Complex> b) {
    const int kd = g.kd;
    std::vector<Complex> out(g.modes(), Complex{0.0, 0.0});
    for (int k1 = -kd; k1 <= kd; ++k1)
        for (int k2 = -kd; k2 <= kd; ++k2)
            for (int k3 = -kd; k3 <= kd; ++k3) {
                Complex sum{0.0, 0.0};
                for (int q1 = std::max(-kd, k1 - kd); q1 <= std::min(kd, k1 + kd); ++q1)
                    for (int q2 = std::max(-kd, k2 - kd); q2 <= std::min(kd, k2 + kd); ++q2)
                        for (int q3 = std::max(-kd, k3 - kd); q3 <= std::min(kd, k3 + kd); ++q3)
                            sum += a[g.index(q1, q2, q3)] *
                                   b[g.index(k1 - q1, k2 - q2, k3 - q3)];
                out[g.index(k1, k2, k3)] = sum;
            }
    return out;
}

VectorField brute_force_convolution(const VectorField& u, const VectorField& v) {
    require_same_grid(u, v);
    if (u.grid.n > 8)
        throw std::invalid_argument("brute_force_convolution: refusing n > 8 (cost guard)");
    const GridSpec g = u.grid;
    VectorField out(g);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const auto prod = convolve_scalar(g, u.component(i), v.component(j));
            add_divergence_term(g, prod, j, out.component(i));
        }
    }
    return out;
}

}  // namespace snse
