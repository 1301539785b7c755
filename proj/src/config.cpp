// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include "snse/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace snse {

namespace {

std::string trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end   = begin + text.size();
    const auto res    = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

bool parse_u64(const std::string& text, std::uint64_t& out) {
    const char* begin = text.data();
    const char* end   = begin + text.size();
    const auto res    = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

bool parse_int(const std::string& text, int& out) {
    const char* begin = text.data();
    const char* end   = begin + text.size();
    const auto res    = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

bool parse_vec3(const std::string& text, std::array<double, 3>& out) {
    std::array<std::string, 3> parts;
    std::size_t start = 0;
    for (int i = 0; i < 2; ++i) {
        const auto comma = text.find(',', start);
        if (comma == std::string::npos) return false;
        parts[static_cast<std::size_t>(i)] = trim(text.substr(start, comma - start));
        start = comma + 1;
    }
    parts[2] = trim(text.substr(start));
    for (int i = 0; i < 3; ++i)
        if (!parse_double(parts[static_cast<std::size_t>(i)], out[static_cast<std::size_t>(i)]))
            return false;
    return true;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double config_epsilon_b(const RunConfig& cfg) {
    return std::sqrt(cfg.noise_b[0] * cfg.noise_b[0] + cfg.noise_b[1] * cfg.noise_b[1] +
                     cfg.noise_b[2] * cfg.noise_b[2]);
}

DataFamily parse_family(const std::string& name) {
    if (name == "shear") return DataFamily::shear;
    if (name == "random") return DataFamily::random_phase;
    if (name == "mixed") return DataFamily::mixed;
    throw std::invalid_argument("unknown data family: " + name);
}

std::vector<std::string> validate_config(const RunConfig& cfg) {
    std::vector<std::string> errors;
    auto fail = [&errors](const std::string& msg) { errors.push_back(msg); };

    if (cfg.grid_n < 4 || cfg.grid_n % 2 != 0)
        fail("grid.N must be an even integer >= 4 (retained modes need kd = floor(N/3) >= 1)");
    if (!(cfg.time_t > 0.0)) fail("time.T must be positive");
    if (!(cfg.time_dt > 0.0)) fail("time.dt must be positive");
    if (cfg.time_t > 0.0 && cfg.time_dt > 0.0) {
        const double ratio = cfg.time_t / cfg.time_dt;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0)
            fail("time.T must be an integer multiple of time.dt");
        if (cfg.time_delta < cfg.time_dt || cfg.time_delta > cfg.time_t)
            fail("time.delta must lie in [dt, T]");
    }
    if (!(cfg.time_c_stab > 0.0)) fail("time.c_stab must be positive");
    if (!(cfg.cutoff_eps_bar > 0.0 && cfg.cutoff_eps_bar < 1.0))
        fail("cutoff.eps_bar must lie in (0,1)");
    if (cfg.cutoff_theta != "quintic")
        fail("cutoff.theta must be 'quintic' (the only supported C1 profile)");
    if (!(cfg.data_eps0 >= 0.0)) fail("data.eps0 must be nonnegative");
    if (!(cfg.data_eps0 * cfg.data_eps0 < 0.5 * cfg.cutoff_eps_bar * cfg.cutoff_eps_bar))
        fail("data.eps0 violates eps0^2 < eps_bar^2/2: the small-data hypothesis that keeps the "
             "stopping probability controlled");
    if (cfg.data_family != "shear" && cfg.data_family != "random" && cfg.data_family != "mixed")
        fail("data.family must be one of shear|random|mixed");
    if (cfg.ensemble_m < 2) fail("ensemble.M must be >= 2");
    if (!(cfg.ensemble_p0_target > 0.0 && cfg.ensemble_p0_target < 1.0))
        fail("ensemble.p0_target must lie in (0,1)");
    if (cfg.picard_max_iter < 1) fail("picard.max_iter must be >= 1");
    if (!(cfg.picard_tol > 0.0)) fail("picard.tol must be positive");
    for (double v : cfg.noise_b)
        if (!std::isfinite(v)) fail("noise.b components must be finite");

    if (cfg.grid_n >= 4 && cfg.grid_n % 2 == 0 && cfg.time_dt > 0.0 && cfg.time_c_stab > 0.0) {
        const double kd  = static_cast<double>(cfg.grid_n / 3);
        const double eb  = config_epsilon_b(cfg);
        const double cap = cfg.time_c_stab / (1.0 + eb * eb * kd * kd);
        if (cfg.time_dt > cap)
            fail("time.dt exceeds the stability cap c_stab/(1 + eps_b^2 kd^2) = " + g17(cap) +
                 " for this grid and noise amplitude");
    }
    return errors;
}

ParseResult parse_config(std::string_view text) {
    ParseResult result;
    RunConfig& cfg = result.config;

    static const std::map<std::string, std::set<std::string>> known = {
        {"grid", {"N"}},
        {"time", {"T", "dt", "delta", "c_stab"}},
        {"cutoff", {"eps_bar", "theta"}},
        {"noise", {"b", "base_seed"}},
        {"data", {"eps0", "family"}},
        {"ensemble", {"M", "p0_target"}},
        {"picard", {"max_iter", "tol"}},
    };

    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw_line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string line = trim(raw_line.substr(0, raw_line.find('#')));
        if (line.empty()) continue;
        auto error_at = [&](const std::string& msg) {
            result.errors.push_back("line " + std::to_string(line_no) + ": " + msg);
        };

        if (line.front() == '[') {
            if (line.back() != ']') {
                error_at("malformed section header");
                continue;
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!known.count(section)) {
                error_at("unknown section [" + section + "]");
                section.clear();
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            error_at("expected key = value");
            continue;
        }
        const std::string key   = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (section.empty()) {
            error_at("key '" + key + "' outside any section");
            continue;
        }
        if (!known.at(section).count(key)) {
            error_at("unknown key '" + key + "' in section [" + section + "]");
            continue;
        }

        bool ok = true;
        if (section == "grid" && key == "N") ok = parse_int(value, cfg.grid_n);
        else if (section == "time" && key == "T") ok = parse_double(value, cfg.time_t);
        else if (section == "time" && key == "dt") ok = parse_double(value, cfg.time_dt);
        else if (section == "time" && key == "delta") ok = parse_double(value, cfg.time_delta);
        else if (section == "time" && key == "c_stab") ok = parse_double(value, cfg.time_c_stab);
        else if (section == "cutoff" && key == "eps_bar") ok = parse_double(value, cfg.cutoff_eps_bar);
        else if (section == "cutoff" && key == "theta") cfg.cutoff_theta = value;
        else if (section == "noise" && key == "b") ok = parse_vec3(value, cfg.noise_b);
        else if (section == "noise" && key == "base_seed") ok = parse_u64(value, cfg.base_seed);
        else if (section == "data" && key == "eps0") ok = parse_double(value, cfg.data_eps0);
        else if (section == "data" && key == "family") cfg.data_family = value;
        else if (section == "ensemble" && key == "M") ok = parse_int(value, cfg.ensemble_m);
        else if (section == "ensemble" && key == "p0_target") ok = parse_double(value, cfg.ensemble_p0_target);
        else if (section == "picard" && key == "max_iter") ok = parse_int(value, cfg.picard_max_iter);
        else if (section == "picard" && key == "tol") ok = parse_double(value, cfg.picard_tol);
        if (!ok) error_at("cannot parse value '" + value + "' for " + section + "." + key);
    }

    for (auto& msg : validate_config(cfg)) result.errors.push_back(msg);
    return result;
}

std::string canonical_text(const RunConfig& cfg) {
    std::string out;
    out += "[grid]\nN = " + std::to_string(cfg.grid_n) + "\n";
    out += "[time]\nT = " + g17(cfg.time_t) + "\ndt = " + g17(cfg.time_dt) +
           "\ndelta = " + g17(cfg.time_delta) + "\nc_stab = " + g17(cfg.time_c_stab) + "\n";
    out += "[cutoff]\neps_bar = " + g17(cfg.cutoff_eps_bar) + "\ntheta = " + cfg.cutoff_theta +
           "\n";
    out += "[noise]\nb = " + g17(cfg.noise_b[0]) + "," + g17(cfg.noise_b[1]) + "," +
           g17(cfg.noise_b[2]) + "\nbase_seed = " + std::to_string(cfg.base_seed) + "\n";
    out += "[data]\neps0 = " + g17(cfg.data_eps0) + "\nfamily = " + cfg.data_family + "\n";
    out += "[ensemble]\nM = " + std::to_string(cfg.ensemble_m) +
           "\np0_target = " + g17(cfg.ensemble_p0_target) + "\n";
    out += "[picard]\nmax_iter = " + std::to_string(cfg.picard_max_iter) +
           "\ntol = " + g17(cfg.picard_tol) + "\n";
    return out;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = canonical_text(cfg);
    std::uint64_t hash     = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

CutoffConfig to_cutoff(const RunConfig& cfg) { return CutoffConfig{cfg.cutoff_eps_bar}; }

TransportSpec to_transport(const RunConfig& cfg) { return make_constant_transport(cfg.noise_b); }

StepperConfig to_stepper_config(const RunConfig& cfg, StepMode mode) {
    return make_stepper_config(GridSpec::cubic(cfg.grid_n), cfg.time_dt, mode, to_transport(cfg),
                               cfg.time_c_stab);
}

EnsembleConfig to_ensemble_config(const RunConfig& cfg, int threads) {
    EnsembleConfig e;
    e.grid      = GridSpec::cubic(cfg.grid_n);
    e.paths     = cfg.ensemble_m;
    e.horizon   = cfg.time_t;
    e.dt        = cfg.time_dt;
    e.cutoff    = to_cutoff(cfg);
    e.transport = to_transport(cfg);
    e.family    = parse_family(cfg.data_family);
    e.eps0      = cfg.data_eps0;
    e.p0_target = cfg.ensemble_p0_target;
    e.base_seed = cfg.base_seed;
    e.delta     = cfg.time_delta;
    e.threads   = threads;
    e.c_stab    = cfg.time_c_stab;
    return e;
}

}  // namespace snse
