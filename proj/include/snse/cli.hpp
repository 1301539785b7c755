// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "snse/config.hpp"

namespace snse {

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;  // measured value of the decisive quantity
    std::string detail;
};

/// Invariant suite behind the `verify` subcommand: spectral identities,
/// inequality properties, oracles, truncation consistency, reproducibility.
std::vector<CheckResult> verify_suite(const RunConfig& cfg, int threads);

/// dt-ladder strong-convergence study against the closed-form shear solution.
struct OracleStudy {
    std::vector<double> dts, rms;
    int paths = 0;
    double fitted_order = 0.0;
};

OracleStudy shear_convergence_study(const RunConfig& cfg, const std::vector<double>& dts,
                                    int paths, int threads);

/// Subcommand driver: run | ensemble | picard | verify | oracle.
/// Writes artifacts under out_dir; returns the process exit status
/// (0 = success, 1 = failed checks, 2 = usage errors).
int dispatch(const std::string& subcommand, const RunConfig& cfg, const std::string& out_dir,
             int threads);

}  // namespace snse
