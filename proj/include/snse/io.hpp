// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "snse/ensemble.hpp"
#include "snse/picard.hpp"

namespace snse {

constexpr int kSchemaVersion = 1;

/// %.17g formatting: round-trip exact for doubles.
std::string format_g17(double v);

/// CSV with columns (step, t, H12_norm, dissipation_integral, Q, psi,
/// stopped); leading comment lines carry schema_version and config_hash.
std::string trajectory_csv(const Trajectory& traj, const std::string& cfg_hash);

/// CSV with columns (m, K_m, D_m, ratio).
std::string picard_trace_csv(const PicardTrace& trace, const std::string& cfg_hash);

/// Per-path summary CSV for an ensemble.
std::string path_summaries_csv(const EnsembleReport& report, const std::string& cfg_hash);

/// EnsembleReport as a JSON document (sorted keys; deterministic bytes).
std::string ensemble_report_json(const EnsembleReport& report, const std::string& cfg_hash);

/// Strong-convergence study CSV: rows (dt, rms_error, paths) plus the
/// fitted order as a trailing comment.
std::string oracle_csv(const std::vector<double>& dts, const std::vector<double>& rms,
                       int paths, double fitted_order, const std::string& cfg_hash);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace snse
