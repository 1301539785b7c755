// SPDX-FileCopyrightText: 2026 The snse-lab authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "snse/cli.hpp"
#include "snse/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"snse: pseudospectral laboratory for 3D incompressible Navier-Stokes "
                 "with transport noise on the torus"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed  = 0;
    bool seed_given     = false;
    int threads         = 0;

    app.add_option("--config", config_path, "configuration file (INI-style sections)")
        ->envname("SNSE_CONFIG");
    app.add_option("--out", out_dir, "output directory")->envname("SNSE_OUT");
    auto* seed_opt =
        app.add_option("--seed", seed, "override [noise] base_seed")->envname("SNSE_SEED");
    app.add_option("--threads", threads, "worker threads (0 = hardware)")
        ->envname("SNSE_THREADS");

    for (const char* name : {"run", "ensemble", "picard", "verify", "oracle"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);
    seed_given = seed_opt->count() > 0;

    std::string text;
    if (!config_path.empty()) {
        try {
            text = snse::read_file(config_path);
        } catch (const std::exception& ex) {
            std::fprintf(stderr, "error: %s\n", ex.what());
            return 2;
        }
    }
    auto parsed = snse::parse_config(text);
    if (seed_given) {
        parsed.config.base_seed = seed;
        parsed.errors           = snse::validate_config(parsed.config);
    }
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) std::fprintf(stderr, "config error: %s\n", e.c_str());
        return 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return snse::dispatch(sub, parsed.config, out_dir, threads);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    }
}
