// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace snse {

MeanSE mean_se(std::span<const double> values) {
    MeanSE out;
    out.n = static_cast<int>(values.size());
    if (out.n == 0) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / out.n;
    if (out.n < 2) return out;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (static_cast<double>(out.n) - 1.0) / out.n);
    return out;
}

WilsonInterval wilson_interval(int successes, int trials, double z) {
    if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be positive");
    const double n    = trials;
    const double p    = static_cast<double>(successes) / n;
    const double z2   = z * z;
    const double den  = 1.0 + z2 / n;
    WilsonInterval w;
    w.center     = (p + z2 / (2.0 * n)) / den;
    w.half_width = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / den;
    w.low        = std::max(0.0, w.center - w.half_width);
    w.high       = std::min(1.0, w.center + w.half_width);
    return w;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || y.size() != x.size()) throw std::invalid_argument("linear_fit: need n >= 2");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit f;
    f.n         = n;
    f.slope     = (n * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;

    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / n;
    for (int i = 0; i < n; ++i) {
        const double fit = f.slope * x[i] + f.intercept;
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (n > 2) {
        const double var = ss_res / (n - 2);
        f.se_slope       = std::sqrt(var * n / det);
        f.se_intercept   = std::sqrt(var * sxx / det);
    }
    return f;
}

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> sigma) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || y.size() != x.size() || sigma.size() != x.size())
        throw std::invalid_argument("weighted_linear_fit: need n >= 2 matching spans");
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!(sigma[i] > 0.0))
            throw std::invalid_argument("weighted_linear_fit: sigma must be positive");
        const double w = 1.0 / (sigma[i] * sigma[i]);
        sw += w;
        sx += w * x[i];
        sy += w * y[i];
        sxx += w * x[i] * x[i];
        sxy += w * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("weighted_linear_fit: degenerate abscissae");
    LinearFit f;
    f.n            = n;
    f.slope        = (sw * sxy - sx * sy) / det;
    f.intercept    = (sxx * sy - sx * sxy) / det;
    f.se_slope     = std::sqrt(sw / det);
    f.se_intercept = std::sqrt(sxx / det);

    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / sw;
    for (int i = 0; i < n; ++i) {
        const double fit = f.slope * x[i] + f.intercept;
        const double w   = 1.0 / (sigma[i] * sigma[i]);
        ss_res += w * (y[i] - fit) * (y[i] - fit);
        ss_tot += w * (y[i] - ybar) * (y[i] - ybar);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

}  // namespace snse
