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

#include <cstdlib>
#include <fstream>
#include <set>

#include <sys/wait.h>

#include "doctest.h"
#include "risnf/errors.hpp"
#include "risnf/experiments.hpp"
#include "test_support.hpp"

using namespace risnf;

namespace
{
    std::size_t error_line(const std::string &text)
    {
        try
        {
            parse_config(text);
        }
        catch (const ConfigError &e)
        {
            return e.line();
        }
        return 0;
    }

    const char *const small_nmse = R"({
  "experiment": "nmse-vs-snr",
  "arrays": {
    "ris": {"count_h": 2, "count_v": 2, "spacing_wavelengths": 0.25},
    "bs": {"count_h": 1, "count_v": 1},
    "ue": {"count_h": 1, "count_v": 1}
  },
  "sweep": {"snr_db": [0, 10]},
  "estimators": ["LS", "RS-LS"],
  "rsls_variants": [{"statistics": "exact", "mc_aware": true}],
  "cluster_seeds": 2,
  "trials": 20
})";

    void write_text(const std::filesystem::path &path, const std::string &text)
    {
        std::ofstream(path) << text;
    }

    int run_cli(const std::string &args)
    {
        const std::string command = std::string(RISNF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
        const int status = std::system(command.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::vector<std::vector<std::string>> rows_of(const ResultTable &t)
    {
        return parse_csv(to_csv(t)).rows;
    }
}

TEST_CASE("experiment names")
{
    for (auto kind : {ExperimentKind::EigenSpectrum, ExperimentKind::RankVsSpacing, ExperimentKind::NmseVsSnr,
                      ExperimentKind::NmseVsSpacing})
        CHECK(parse_experiment_name(experiment_name(kind)) == kind);
    CHECK_FALSE(parse_experiment_name("nmse").has_value());
}

TEST_CASE("config errors carry line numbers")
{
    CHECK(error_line("{\n  \"experiment\": \"nmse-vs-snr\",\n  \"trails\": 3\n}") == 3);
    CHECK(error_line("{\n  \"experiment\": \"nmse-vs-snr\",\n  \"trials\": \"many\"\n}") == 3);
    CHECK(error_line("{\n  \"experiment\": \"nmse-vs-snr\",\n  \"trials\": 3,\n}") == 4);
    CHECK(error_line("{\n  \"experiment\": \"fig9\"\n}") == 2);
    CHECK(error_line("{\n  \"experiment\": \"nmse-vs-snr\",\n  \"estimators\": []\n}") == 3);
    CHECK(error_line("{\n  \"experiment\": \"rank-vs-spacing\",\n  \"sweep\": {\n    \"spacing_wavelengths\": [-0.5]\n  }\n}") ==
          4);
    CHECK(error_line("{\n  \"experiment\": \"nmse-vs-snr\",\n  \"arrays\": {\"ris\": {\"count_h\": 2, \"colour\": 1}}\n}") ==
          3);
    CHECK_THROWS_AS(parse_config("{}"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/risnf.json"), Error);
}

TEST_CASE("per-experiment defaults")
{
    const auto snr = parse_config(R"({"experiment": "nmse-vs-snr", "sweep": {"snr_db": [0]}})");
    CHECK(snr.spec.ris.total() == 100);
    CHECK(snr.spec.bs.total() == 16);
    CHECK(snr.spec.ue.total() == 4);
    CHECK(snr.rsls.size() == 4);
    CHECK_THROWS_AS(parse_config(R"({"experiment": "nmse-vs-snr"})"), ConfigError);

    const auto spacing = parse_config(R"({"experiment": "nmse-vs-spacing", "sweep": {"spacing_wavelengths": [0.5]}})");
    CHECK(spacing.spec.ris.total() == 128);
    CHECK_FALSE(spacing.mmse);
    CHECK(spacing.snr_db == std::vector<double>{0.0});

    const auto spectrum = parse_config(R"({"experiment": "eigen-spectrum"})");
    CHECK(spectrum.spec.ris.total() == 1024);
    CHECK(spectrum.spacings == std::vector<double>{0.5, 0.25});
    CHECK(spectrum.trials == 200);
    CHECK(spectrum.cluster_seeds == 10);
}

TEST_CASE("config hash")
{
    auto a = parse_config(small_nmse);
    auto b = a;
    b.threads = 8;
    b.output_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
    b = a;
    b.spec.coupling = false;
    CHECK(config_hash(a) != config_hash(b));
    CHECK_FALSE(version_string().empty());
}

TEST_CASE("single-element spectrum is 0 dB")
{
    auto cfg = parse_config(R"({"experiment": "eigen-spectrum",
        "arrays": {"ris": {"count_h": 1, "count_v": 1}}, "sweep": {"spacing_wavelengths": [0.5]}})");
    ArtifactCache cache;
    const ResultTable t = run_experiment(cfg, cache);
    const CsvDocument doc = parse_csv(to_csv(t));
    REQUIRE(doc.rows.size() == 4); // exact and subspace, with and without coupling
    for (const auto &row : doc.rows)
        CHECK(std::abs(std::stod(row[doc.column("eigenvalue_db")])) < 1e-9);
}

TEST_CASE("rank table for a single spacing")
{
    auto cfg = parse_config(R"({"experiment": "rank-vs-spacing",
        "sweep": {"spacing_wavelengths": [0.25], "ris_sizes": [[4, 4], [8, 4]]},
        "rank_thresholds": [1e-3, 1e-5]})");
    ArtifactCache cache;
    const CsvDocument doc = parse_csv(to_csv(run_experiment(cfg, cache)));
    CHECK(doc.rows.size() == 2 * 2 * 2 * 2);
    for (const auto &row : doc.rows)
    {
        const int rank = std::stoi(row[doc.column("rank")]);
        CHECK(rank >= 1);
        CHECK(rank <= std::stoi(row[doc.column("elements")]));
    }
    CHECK(doc.metadata_value("config_hash") == config_hash(cfg));
}

TEST_CASE("LS analytic column is 1 / (gamma K N)")
{
    auto cfg = parse_config(small_nmse);
    ArtifactCache cache;
    const CsvDocument doc = parse_csv(to_csv(run_experiment(cfg, cache)));
    std::size_t ls_rows = 0;
    for (const auto &row : doc.rows)
    {
        if (row[doc.column("estimator")] != "LS")
            continue;
        ++ls_rows;
        const double snr_db = std::stod(row[doc.column("snr_db")]);
        CHECK(std::stod(row[doc.column("nmse_analytic_db")]) ==
              doctest::Approx(-snr_db - 10.0 * std::log10(4.0)).epsilon(1e-9));
    }
    CHECK(ls_rows == 2);
    CHECK(doc.rows.size() == 4);
}

TEST_CASE("results do not depend on the thread count")
{
    auto cfg = parse_config(small_nmse);
    ArtifactCache cache;
    const auto serial = rows_of(run_experiment(cfg, cache));
    cfg.threads = 3;
    CHECK(rows_of(run_experiment(cfg, cache)) == serial);
}

TEST_CASE("run_and_write with cache reuse")
{
    const auto dir = test::scratch_dir("experiments");
    auto cfg = parse_config(small_nmse);
    cfg.output_dir = dir;
    set_diagnostics_enabled(false);
    const auto first = run_and_write(cfg, true);
    const auto second = run_and_write(cfg, true);
    set_diagnostics_enabled(true);
    CHECK(std::filesystem::exists(first.csv));
    REQUIRE(first.svg.has_value());
    CHECK(std::filesystem::exists(*first.svg));
    CHECK(first.cache_misses > 0);
    CHECK(second.cache_misses == 0);
    CHECK(second.cache_hits == first.cache_misses);
    const CsvDocument doc = read_csv(first.csv);
    for (const auto &key : required_metadata())
        CHECK_FALSE(doc.metadata_value(key).empty());
    std::filesystem::remove_all(dir);
}

TEST_CASE("command-line exit codes")
{
    const auto dir = test::scratch_dir("cli");
    const std::string out = "--out " + (dir / "out").string();
    write_text(dir / "ok.json", small_nmse);
    write_text(dir / "unknown.json", "{\"experiment\": \"nmse-vs-snr\", \"trails\": 2}");
    write_text(dir / "dipole.json", R"({"experiment": "nmse-vs-snr",
        "arrays": {"ris": {"count_h": 2, "count_v": 1}, "bs": {"count_h": 1, "count_v": 1}, "ue": {"count_h": 1, "count_v": 1}},
        "coupling": {"dipole_length_wavelengths": 0.3}, "sweep": {"snr_db": [0]}, "cluster_seeds": 1, "trials": 2})");

    CHECK(run_cli("nmse-vs-snr --config " + (dir / "ok.json").string() + " " + out + " --trials 5 --plot") == 0);
    CHECK(std::filesystem::exists(dir / "out" / "nmse-vs-snr.csv"));
    CHECK(std::filesystem::exists(dir / "out" / "nmse-vs-snr.svg"));
    CHECK(read_csv(dir / "out" / "nmse-vs-snr.csv").metadata_value("trials") == "5");
    CHECK(run_cli("nmse-vs-snr --config " + (dir / "unknown.json").string() + " " + out) == 2);
    CHECK(run_cli("eigen-spectrum --config " + (dir / "ok.json").string() + " " + out) == 2);
    CHECK(run_cli("nmse-vs-snr --config " + (dir / "dipole.json").string() + " " + out) == 3);
    CHECK(run_cli("nmse-vs-snr --config " + (dir / "missing.json").string() + " " + out) == 4);
    write_text(dir / "blocker", "");
    CHECK(run_cli("nmse-vs-snr --config " + (dir / "ok.json").string() + " --out " + (dir / "blocker" / "x").string()) ==
          4);
    std::filesystem::remove_all(dir);
}
