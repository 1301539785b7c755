// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snse/ensemble.hpp"

namespace snse {

/// Flat experiment configuration, mirrored one-to-one by the text format:
/// [grid] N; [time] T, dt, delta, c_stab; [cutoff] eps_bar, theta;
/// [noise] b, base_seed; [data] eps0, family; [ensemble] M, p0_target;
/// [picard] max_iter, tol.
struct RunConfig {
    int grid_n = 16;

    double time_t      = 5.0;
    double time_dt     = 1e-3;
    double time_delta  = 0.25;
    double time_c_stab = 0.5;

    double cutoff_eps_bar    = 0.2;
    std::string cutoff_theta = "quintic";

    std::array<double, 3> noise_b = {0.0, 0.0, 0.05};
    std::uint64_t base_seed       = 20260811;

    double data_eps0        = 0.02;
    std::string data_family = "mixed";

    int ensemble_m            = 200;
    double ensemble_p0_target = 0.05;

    int picard_max_iter = 50;
    double picard_tol   = 1e-10;
};

struct ParseResult {
    RunConfig config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

/// Parses the text format and validates every constraint, reporting the full
/// list of violations (not just the first). Empty text yields the defaults.
ParseResult parse_config(std::string_view text);

/// Constraint violations of an in-memory config (empty when valid).
std::vector<std::string> validate_config(const RunConfig& cfg);

/// Normalized text form with fixed section/key order and 17-digit numbers;
/// equal configs serialize identically.
std::string canonical_text(const RunConfig& cfg);

/// FNV-1a 64-bit hash of canonical_text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

double config_epsilon_b(const RunConfig& cfg);
DataFamily parse_family(const std::string& name);

CutoffConfig to_cutoff(const RunConfig& cfg);
TransportSpec to_transport(const RunConfig& cfg);
StepperConfig to_stepper_config(const RunConfig& cfg, StepMode mode);
EnsembleConfig to_ensemble_config(const RunConfig& cfg, int threads);

}  // namespace snse
