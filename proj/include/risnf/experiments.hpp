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

#ifndef RISNF_EXPERIMENTS_HPP
#define RISNF_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "risnf/cache.hpp"
#include "risnf/plot.hpp"
#include "risnf/results.hpp"
#include "risnf/scenario.hpp"

namespace risnf
{
    enum class ExperimentKind
    {
        EigenSpectrum,
        RankVsSpacing,
        NmseVsSnr,
        NmseVsSpacing
    };

    std::string_view experiment_name(ExperimentKind kind) noexcept;
    std::optional<ExperimentKind> parse_experiment_name(std::string_view name) noexcept;

    // Invalid configuration. line() is 1-based, 0 when unknown.
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(const std::string &what, std::size_t line = 0);

        std::size_t line() const noexcept { return line_; }

    private:
        std::size_t line_;
    };

    struct ExperimentConfig
    {
        ExperimentKind kind = ExperimentKind::NmseVsSnr;
        ScenarioSpec spec;

        // Sweep grid
        std::vector<double> snr_db;
        std::vector<double> spacings; // wavelengths
        std::vector<std::pair<std::size_t, std::size_t>> ris_sizes;

        // Estimators (NMSE experiments)
        bool ls = true;
        bool mmse = true;
        std::vector<RslsVariant> rsls;

        // Correlation kinds (spectrum and rank experiments)
        bool exact = true;
        bool subspace = true;

        std::vector<double> rank_thresholds{default_rank_threshold};
        std::size_t cluster_seeds = 10;
        std::size_t trials = 200;
        std::uint64_t seed = 1;
        unsigned threads = 1;
        std::size_t pilot_length = 0; // 0 selects K N
        double noise_variance = 1.0;
        std::filesystem::path output_dir = "results";
    };

    // Strict JSON: unknown keys, wrong types and missing sweep grids are
    // ConfigErrors carrying the offending line.
    ExperimentConfig parse_config(const std::string &text);
    ExperimentConfig load_config(const std::filesystem::path &path);

    // Canonical description of everything that affects results; output
    // directory and thread count are excluded
    std::string canonical_config(const ExperimentConfig &cfg);
    std::string config_hash(const ExperimentConfig &cfg);

    std::string version_string();

    ResultTable run_experiment(const ExperimentConfig &cfg, ArtifactCache &cache);

    PlotSpec default_plot(ExperimentKind kind);

    struct ExperimentOutputs
    {
        std::filesystem::path csv;
        std::optional<std::filesystem::path> svg;
        std::size_t rows = 0;
        std::size_t cache_hits = 0;
        std::size_t cache_misses = 0;
    };

    // Runs, writes <out>/<experiment>.csv (and .svg), caching under <out>/cache
    ExperimentOutputs run_and_write(const ExperimentConfig &cfg, bool plot);
}

#endif
