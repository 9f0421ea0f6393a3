// SPDX-License-Identifier: Apache-2.0
//
// risnf: near-field RIS channel modelling and estimation library
// Copyright (C) 2026 The risnf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "risnf/cache.hpp"
#include "risnf/errors.hpp"
#include "risnf/experiments.hpp"

namespace
{
    enum ExitCode
    {
        exit_ok = 0,
        exit_usage = 1,
        exit_config = 2,
        exit_numerical = 3,
        exit_io = 4
    };
}

int main(int argc, char **argv)
{
    CLI::App app{"risnf: near-field RIS channel estimation experiments"};
    app.set_version_flag("--version", risnf::version_string());

    std::string experiment;
    std::string config_path;
    bool plot = false;
    std::string out_dir;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool quiet = false;
    bool verbose = false;

    app.add_option("experiment", experiment, "eigen-spectrum, rank-vs-spacing, nmse-vs-snr or nmse-vs-spacing")
        ->required();
    app.add_option("--config", config_path, "experiment configuration (JSON)")->required();
    app.add_flag("--plot", plot, "also write an SVG chart derived from the CSV");
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    auto *trials_opt = app.add_option("--trials", trials, "Monte Carlo trials per cluster draw")->check(CLI::PositiveNumber);
    auto *seed_opt = app.add_option("--seed", seed, "master seed");
    auto *threads_opt = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("-q,--quiet", quiet, "suppress diagnostics");
    app.add_flag("-v,--verbose", verbose, "log every cache hit and store");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    risnf::set_diagnostics_enabled(!quiet);
    risnf::set_verbose(verbose);
    try
    {
        const auto kind = risnf::parse_experiment_name(experiment);
        if (!kind)
            throw risnf::ConfigError("unknown experiment '" + experiment +
                                     "' (eigen-spectrum, rank-vs-spacing, nmse-vs-snr, nmse-vs-spacing)");
        risnf::ExperimentConfig cfg = risnf::load_config(config_path);
        if (cfg.kind != *kind)
            throw risnf::ConfigError("command line asks for '" + experiment + "' but the config describes '" +
                                     std::string(risnf::experiment_name(cfg.kind)) + "'");
        if (*trials_opt)
            cfg.trials = trials;
        if (*seed_opt)
            cfg.seed = seed;
        if (*threads_opt)
            cfg.threads = threads;
        if (!out_dir.empty())
            cfg.output_dir = out_dir;

        const auto out = risnf::run_and_write(cfg, plot);
        std::cout << out.csv.string() << '\n';
        if (out.svg)
            std::cout << out.svg->string() << '\n';
        risnf::diagnostic(std::to_string(out.rows) + " rows; cache hit " + std::to_string(out.cache_hits) + ", miss " +
                          std::to_string(out.cache_misses));
        return exit_ok;
    }
    catch (const risnf::ConfigError &e)
    {
        std::cerr << "risnf: " << e.what() << '\n';
        return exit_config;
    }
    catch (const risnf::Error &e)
    {
        std::cerr << "risnf: " << e.what() << '\n';
        if (e.kind() == risnf::ErrorKind::Io)
            return exit_io;
        if (e.kind() == risnf::ErrorKind::InvalidArgument)
            return exit_config;
        std::cerr << "risnf: numerical failure (" << risnf::error_kind_name(e.kind()) << ")\n";
        return exit_numerical;
    }
    catch (const std::filesystem::filesystem_error &e)
    {
        std::cerr << "risnf: io: " << e.what() << '\n';
        return exit_io;
    }
    catch (const std::ios_base::failure &e)
    {
        std::cerr << "risnf: io: " << e.what() << '\n';
        return exit_io;
    }
}
