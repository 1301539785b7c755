// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace snse {

struct MeanSE {
    double mean = 0.0;
    double se   = 0.0;
    int n       = 0;
};

MeanSE mean_se(std::span<const double> values);

/// Wilson score interval for a binomial proportion.
struct WilsonInterval {
    double center     = 0.0;
    double half_width = 0.0;
    double low        = 0.0;
    double high       = 0.0;
};

WilsonInterval wilson_interval(int successes, int trials, double z = 1.96);

struct LinearFit {
    double slope = 0.0, intercept = 0.0;
    double se_slope = 0.0, se_intercept = 0.0;
    double r2 = 0.0;
    int n     = 0;
};

/// Ordinary least squares; parameter SEs from the residual variance.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Weighted least squares with known per-point standard deviations; the
/// parameter SEs come from the weights, not the residuals.
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> sigma);

}  // namespace snse
