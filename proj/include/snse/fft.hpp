// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "snse/field.hpp"
#include "snse/grid.hpp"

struct fftw_plan_s;

namespace snse {

/// Per-thread FFT workspace for one grid: owns the r2c/c2r plans and the
/// padded collocation buffers used by the pseudospectral products.
///
/// Plans are created with FFTW_ESTIMATE so that the chosen algorithm (and
/// hence the rounding of every transform) depends only on the grid size,
/// which keeps outputs byte-reproducible across runs and machines with the
/// same FFTW build. Plan creation is serialized internally; execution is
/// thread-safe as long as each thread uses its own workspace.
class FourierWorkspace {
  public:
    explicit FourierWorkspace(GridSpec g);
    ~FourierWorkspace();

    FourierWorkspace(const FourierWorkspace&)            = delete;
    FourierWorkspace& operator=(const FourierWorkspace&) = delete;

    GridSpec grid() const { return grid_; }

    /// Evaluate the truncated series sum_k u_hat(k) e^{i k.x} on the n^3
    /// collocation grid. Requires a Hermitian-symmetric coefficient cube.
    void cube_to_physical(std::span<const Complex> cube, double* phys);

    /// Forward transform of collocation values, normalized by 1/n^3, with
    /// modes outside the retained cube discarded (2/3-rule dealiasing).
    /// The output cube is Hermitian-symmetric by construction.
    void physical_to_cube(const double* phys, std::span<Complex> cube);

    /// Scratch collocation buffers (n^3 doubles each), i in [0, 8).
    double* phys(int i);

  private:
    GridSpec grid_;
    std::size_t phys_count_;
    std::size_t half_count_;
    double* real_ = nullptr;          // c2r/r2c real side
    void* half_   = nullptr;          // fftw_complex[n*n*(n/2+1)]
    double* bufs_[8] = {};
    fftw_plan_s* plan_c2r_ = nullptr;
    fftw_plan_s* plan_r2c_ = nullptr;
};

}  // namespace snse
