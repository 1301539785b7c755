// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace snse {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string header(const std::string& cfg_hash) {
    return "# schema_version=" + std::to_string(kSchemaVersion) + "\n# config_hash=" + cfg_hash +
           "\n";
}

nlohmann::json estimate_json(const MeanSE& e) {
    return {{"mean", e.mean}, {"se", e.se}, {"n", e.n}};
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj, const std::string& cfg_hash) {
    std::string out = header(cfg_hash);
    out += "step,t,H12_norm,dissipation_integral,Q,psi,stopped\n";
    const int steps = static_cast<int>(traj.fields.size()) - 1;
    for (int n = 0; n <= steps; ++n) {
        const auto i     = static_cast<std::size_t>(n);
        const double t   = n * traj.dt;
        const double h12 = std::sqrt(traj.h12sq[i]);
        const double q   = std::sqrt(traj.q_sq(n));
        const double psi = n < steps && !traj.records.empty()
                               ? traj.records[i].psi
                               : theta_eval(traj.psi_argument_at(n));
        const bool stopped = traj.stopped && traj.tau >= 0.0 && t >= traj.tau;
        out += std::to_string(n) + "," + format_g17(t) + "," + format_g17(h12) + "," +
               format_g17(traj.diss[i]) + "," + format_g17(q) + "," + format_g17(psi) + "," +
               (stopped ? "1" : "0") + "\n";
    }
    return out;
}

std::string picard_trace_csv(const PicardTrace& trace, const std::string& cfg_hash) {
    std::string out = header(cfg_hash);
    out += "m,K_m,D_m,ratio\n";
    for (std::size_t m = 0; m < trace.K.size(); ++m) {
        out += std::to_string(m) + "," + format_g17(trace.K[m]) + "," + format_g17(trace.D[m]) +
               ",";
        if (m >= 1 && std::isfinite(trace.ratio[m])) out += format_g17(trace.ratio[m]);
        out += "\n";
    }
    return out;
}

std::string path_summaries_csv(const EnsembleReport& report, const std::string& cfg_hash) {
    std::string out = header(cfg_hash);
    out += "substream,u0_h12sq,sup_Q2,gap,diss_H1,diss_H32,stopped,tau,diverged,"
           "residual_total,residual_martingale\n";
    for (std::size_t i = 0; i < report.per_path.size(); ++i) {
        const auto& p = report.per_path[i];
        out += std::to_string(i) + "," + format_g17(p.u0_h12sq) + "," + format_g17(p.sup_q_sq) +
               "," + format_g17(p.gap) + "," + format_g17(p.diss_h1) + "," +
               format_g17(p.diss_h32) + "," + (p.stopped ? "1" : "0") + "," +
               format_g17(p.tau) + "," + (p.diverged ? "1" : "0") + "," +
               format_g17(p.residual_total) + "," + format_g17(p.residual_martingale) + "\n";
    }
    return out;
}

std::string ensemble_report_json(const EnsembleReport& report, const std::string& cfg_hash) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["config_hash"]    = cfg_hash;
    j["paths"]          = report.paths;
    j["diverged"]       = report.diverged;
    j["stop_count"]     = report.stop_count;
    j["stop_fraction"]  = report.stop_fraction;
    j["wilson"]         = {{"half_width", report.wilson_half_width},
                           {"low", report.wilson_low},
                           {"high", report.wilson_high}};
    j["est_sup_Q2"]          = estimate_json(report.sup_q2);
    j["est_gap"]             = estimate_json(report.gap);
    j["est_dissipation_H1"]  = estimate_json(report.diss_h1);
    j["est_dissipation_H32"] = estimate_json(report.diss_h32);
    j["est_sup_H12sq"]       = estimate_json(report.sup_h12sq);
    j["est_int_H12_H32"]     = estimate_json(report.int_h12_h32);
    j["est_u0_H12sq"]        = estimate_json(report.u0_h12sq);
    j["martingale_residual"] = {{"total", estimate_json(report.residual_total)},
                                {"martingale", estimate_json(report.residual_martingale)},
                                {"bias", estimate_json(report.residual_bias)}};
    j["empirical_C65"]  = report.empirical_c65;
    j["markov_bound"]   = report.markov_bound;
    j["max_preflag_Q2"] = report.max_preflag_q2;
    j["max_overshoot"]  = report.max_overshoot;
    j["params"]         = {{"eps_bar", report.eps_bar}, {"eps0", report.eps0},
                           {"epsilon_b", report.epsilon_b}, {"T", report.horizon},
                           {"dt", report.dt}, {"N", report.grid_n},
                           {"base_seed", report.base_seed}};
    return j.dump(2) + "\n";
}

std::string oracle_csv(const std::vector<double>& dts, const std::vector<double>& rms,
                       int paths, double fitted_order, const std::string& cfg_hash) {
    std::string out = header(cfg_hash);
    out += "dt,rms_error,paths,order_vs_prev\n";
    for (std::size_t i = 0; i < dts.size(); ++i) {
        out += format_g17(dts[i]) + "," + format_g17(rms[i]) + "," + std::to_string(paths) + ",";
        if (i > 0 && rms[i] > 0.0 && dts[i - 1] != dts[i])
            out += format_g17(std::log(rms[i - 1] / rms[i]) / std::log(dts[i - 1] / dts[i]));
        out += "\n";
    }
    out += "# fitted_order=" + format_g17(fitted_order) + "\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace snse
