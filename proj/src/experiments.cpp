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

#include "risnf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "risnf/errors.hpp"
#include "risnf/spectral.hpp"
#include "risnf_version.hpp"

namespace risnf
{
    using nlohmann::json;

    namespace
    {
        constexpr std::pair<ExperimentKind, std::string_view> experiment_names[] = {
            {ExperimentKind::EigenSpectrum, "eigen-spectrum"},
            {ExperimentKind::RankVsSpacing, "rank-vs-spacing"},
            {ExperimentKind::NmseVsSnr, "nmse-vs-snr"},
            {ExperimentKind::NmseVsSpacing, "nmse-vs-spacing"},
        };
    }

    std::string_view experiment_name(ExperimentKind kind) noexcept
    {
        for (const auto &[k, name] : experiment_names)
            if (k == kind)
                return name;
        return "unknown";
    }

    std::optional<ExperimentKind> parse_experiment_name(std::string_view name) noexcept
    {
        for (const auto &[k, n] : experiment_names)
            if (n == name)
                return k;
        return std::nullopt;
    }

    namespace
    {
        std::string with_line(const std::string &what, std::size_t line)
        {
            return line ? "config line " + std::to_string(line) + ": " + what : "config: " + what;
        }
    }

    ConfigError::ConfigError(const std::string &what, std::size_t line)
        : std::runtime_error(with_line(what, line)), line_(line) {}

    namespace
    {
        // Walks the JSON tree with a pointer so errors name the exact field
        class Reader
        {
        public:
            explicit Reader(const std::string &text) : text_(text) {}

            // Line of the last key of `pointer`, found by scanning for each key in order
            std::size_t line_of(const std::string &pointer) const
            {
                std::size_t pos = 0;
                bool found = false;
                std::istringstream in(pointer);
                std::string seg;
                while (std::getline(in, seg, '/'))
                {
                    if (seg.empty() || std::all_of(seg.begin(), seg.end(), ::isdigit))
                        continue;
                    const auto at = text_.find("\"" + seg + "\"", pos);
                    if (at == std::string::npos)
                        break;
                    pos = at;
                    found = true;
                }
                if (!found)
                    return 0;
                return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + pos, '\n'));
            }

            [[noreturn]] void error(const std::string &pointer, const std::string &what) const
            {
                throw ConfigError((pointer.empty() ? std::string("/") : pointer) + ": " + what, line_of(pointer));
            }

            void object(const json &j, const std::string &ptr, std::initializer_list<std::string_view> allowed) const
            {
                if (!j.is_object())
                    error(ptr, "expected an object");
                for (const auto &item : j.items())
                    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
                        error(ptr + "/" + item.key(), "unknown key '" + item.key() + "'");
            }

            double number(const json &j, const std::string &ptr) const
            {
                if (!j.is_number())
                    error(ptr, "expected a number");
                const double v = j.get<double>();
                if (!std::isfinite(v))
                    error(ptr, "expected a finite number");
                return v;
            }

            double positive(const json &j, const std::string &ptr) const
            {
                const double v = number(j, ptr);
                if (!(v > 0.0))
                    error(ptr, "expected a positive number");
                return v;
            }

            std::uint64_t unsigned_integer(const json &j, const std::string &ptr) const
            {
                if (!j.is_number_unsigned())
                    error(ptr, "expected a non-negative integer");
                return j.get<std::uint64_t>();
            }

            std::size_t count(const json &j, const std::string &ptr) const
            {
                const auto v = unsigned_integer(j, ptr);
                if (v == 0)
                    error(ptr, "expected a positive integer");
                return static_cast<std::size_t>(v);
            }

            bool boolean(const json &j, const std::string &ptr) const
            {
                if (!j.is_boolean())
                    error(ptr, "expected true or false");
                return j.get<bool>();
            }

            std::string string(const json &j, const std::string &ptr) const
            {
                if (!j.is_string())
                    error(ptr, "expected a string");
                return j.get<std::string>();
            }

            const json &array(const json &j, const std::string &ptr, bool nonempty = true) const
            {
                if (!j.is_array())
                    error(ptr, "expected an array");
                if (nonempty && j.empty())
                    error(ptr, "must not be empty");
                return j;
            }

            Interval interval(const json &j, const std::string &ptr, double scale) const
            {
                array(j, ptr);
                if (j.size() != 2)
                    error(ptr, "expected [low, high]");
                Interval out{number(j[0], ptr + "/0") * scale, number(j[1], ptr + "/1") * scale};
                if (!(out.lo < out.hi))
                    error(ptr, "low must be below high");
                return out;
            }

            // Runs a library validator, reporting its complaint at `ptr`
            void check(const std::string &ptr, const std::function<void()> &fn) const
            {
                try
                {
                    fn();
                }
                catch (const Error &e)
                {
                    if (e.kind() != ErrorKind::InvalidArgument)
                        throw;
                    error(ptr, e.what());
                }
            }

        private:
            const std::string &text_;
        };

        void read_array(const Reader &rd, const json &j, const std::string &ptr, ArrayRole role,
                        const SystemConfig &sys, ArrayConfig &out)
        {
            rd.object(j, ptr, {"count_h", "count_v", "spacing_wavelengths"});
            std::size_t h = out.count_h, v = out.count_v;
            double spacing = out.spacing / sys.wavelength();
            if (j.contains("count_h"))
                h = rd.count(j["count_h"], ptr + "/count_h");
            if (j.contains("count_v"))
                v = rd.count(j["count_v"], ptr + "/count_v");
            if (j.contains("spacing_wavelengths"))
                spacing = rd.positive(j["spacing_wavelengths"], ptr + "/spacing_wavelengths");
            rd.check(ptr, [&] {
                out = ArrayConfig::from_wavelengths(role, h, v, spacing, sys);
                validate(out);
            });
        }

        void apply_kind_defaults(ExperimentConfig &cfg)
        {
            const SystemConfig &sys = cfg.spec.sys;
            switch (cfg.kind)
            {
            case ExperimentKind::EigenSpectrum:
            case ExperimentKind::RankVsSpacing:
                cfg.spec.ris = ArrayConfig::from_wavelengths(ArrayRole::RIS, 32, 32, 0.5, sys);
                cfg.spacings = {0.5, 0.25};
                break;
            case ExperimentKind::NmseVsSnr:
                cfg.spec.ris = ArrayConfig::from_wavelengths(ArrayRole::RIS, 10, 10, 0.125, sys);
                cfg.spec.bs = ArrayConfig::from_wavelengths(ArrayRole::BS, 4, 4, 0.25, sys);
                cfg.spec.ue = ArrayConfig::from_wavelengths(ArrayRole::UE, 2, 2, 0.125, sys);
                cfg.rsls = {{CorrelationKind::ExactClustered, true},
                            {CorrelationKind::ExactClustered, false},
                            {CorrelationKind::Subspace, true},
                            {CorrelationKind::Subspace, false}};
                break;
            case ExperimentKind::NmseVsSpacing:
                cfg.spec.ris = ArrayConfig::from_wavelengths(ArrayRole::RIS, 16, 8, 0.5, sys);
                cfg.spec.bs = ArrayConfig::from_wavelengths(ArrayRole::BS, 4, 2, 0.5, sys);
                cfg.spec.ue = ArrayConfig::from_wavelengths(ArrayRole::UE, 2, 2, 0.5, sys);
                cfg.mmse = false;
                cfg.rsls = {{CorrelationKind::Subspace, true}};
                cfg.snr_db = {0.0};
                break;
            }
        }

        CorrelationKind parse_statistics(const Reader &rd, const json &j, const std::string &ptr)
        {
            const auto s = rd.string(j, ptr);
            if (s == "exact")
                return CorrelationKind::ExactClustered;
            if (s == "subspace")
                return CorrelationKind::Subspace;
            rd.error(ptr, "expected \"exact\" or \"subspace\", found \"" + s + "\"");
        }

        std::string_view statistics_name(CorrelationKind kind)
        {
            return kind == CorrelationKind::Subspace ? "subspace" : "exact";
        }
    }

    ExperimentConfig parse_config(const std::string &text)
    {
        json root;
        try
        {
            root = json::parse(text, nullptr, true, false);
        }
        catch (const json::parse_error &e)
        {
            // Byte offset to line
            const std::size_t at = std::min<std::size_t>(e.byte, text.size());
            const std::size_t line =
                1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + (at ? at - 1 : 0), '\n'));
            std::string msg = e.what();
            if (const auto p = msg.find("syntax error"); p != std::string::npos)
                msg = msg.substr(p);
            throw ConfigError("invalid JSON: " + msg, line);
        }

        const Reader rd(text);
        rd.object(root, "",
                  {"experiment", "system", "arrays", "clusters", "subspace", "coupling", "training", "sweep",
                   "estimators", "rsls_variants", "correlation_kinds", "rank_threshold", "rank_thresholds",
                   "cluster_seeds", "trials", "seed", "threads", "output_dir"});

        ExperimentConfig cfg;
        if (!root.contains("experiment"))
            rd.error("", "missing key 'experiment'");
        {
            const auto name = rd.string(root["experiment"], "/experiment");
            const auto kind = parse_experiment_name(name);
            if (!kind)
                rd.error("/experiment", "unknown experiment \"" + name +
                                            "\" (eigen-spectrum, rank-vs-spacing, nmse-vs-snr, nmse-vs-spacing)");
            cfg.kind = *kind;
        }

        if (root.contains("system"))
        {
            const json &s = root["system"];
            rd.object(s, "/system", {"carrier_frequency_hz"});
            if (s.contains("carrier_frequency_hz"))
                cfg.spec.sys = make_system(rd.positive(s["carrier_frequency_hz"], "/system/carrier_frequency_hz"));
        }
        apply_kind_defaults(cfg);

        if (root.contains("arrays"))
        {
            const json &a = root["arrays"];
            rd.object(a, "/arrays", {"ris", "bs", "ue"});
            if (a.contains("ris"))
                read_array(rd, a["ris"], "/arrays/ris", ArrayRole::RIS, cfg.spec.sys, cfg.spec.ris);
            if (a.contains("bs"))
                read_array(rd, a["bs"], "/arrays/bs", ArrayRole::BS, cfg.spec.sys, cfg.spec.bs);
            if (a.contains("ue"))
                read_array(rd, a["ue"], "/arrays/ue", ArrayRole::UE, cfg.spec.sys, cfg.spec.ue);
        }

        if (root.contains("clusters"))
        {
            const json &c = root["clusters"];
            const std::string p = "/clusters";
            rd.object(c, p,
                      {"count", "rays_per_cluster", "azimuth_deg", "elevation_deg", "distance_m",
                       "angular_spread_deg", "distance_spread_m", "average_gain", "solid_angle_weighting"});
            ClusterSet &cl = cfg.spec.clusters;
            const double deg = pi / 180.0;
            if (c.contains("count"))
                cl.cluster_count = rd.count(c["count"], p + "/count");
            if (c.contains("rays_per_cluster"))
                cl.rays_per_cluster = rd.count(c["rays_per_cluster"], p + "/rays_per_cluster");
            if (c.contains("azimuth_deg"))
                cl.azimuth = rd.interval(c["azimuth_deg"], p + "/azimuth_deg", deg);
            if (c.contains("elevation_deg"))
                cl.elevation = rd.interval(c["elevation_deg"], p + "/elevation_deg", deg);
            if (c.contains("distance_m"))
                cl.distance = rd.interval(c["distance_m"], p + "/distance_m", 1.0);
            if (c.contains("angular_spread_deg"))
                cl.angular_spread_std = rd.number(c["angular_spread_deg"], p + "/angular_spread_deg") * deg;
            if (c.contains("distance_spread_m"))
                cl.distance_spread_std = rd.number(c["distance_spread_m"], p + "/distance_spread_m");
            if (c.contains("average_gain"))
                cl.average_gain = rd.positive(c["average_gain"], p + "/average_gain");
            if (c.contains("solid_angle_weighting"))
                cl.solid_angle_weighting = rd.boolean(c["solid_angle_weighting"], p + "/solid_angle_weighting");
            rd.check(p, [&] { validate(cl); });
        }

        if (root.contains("subspace"))
        {
            const json &s = root["subspace"];
            const std::string p = "/subspace";
            rd.object(s, p, {"quadrature", "nodes_azimuth", "nodes_elevation", "nodes_distance", "samples",
                             "auto_refine", "solid_angle_weighting"});
            SubspaceIntegrationGrid &g = cfg.spec.grid;
            if (s.contains("quadrature"))
            {
                const auto q = rd.string(s["quadrature"], p + "/quadrature");
                if (q == "gauss-legendre")
                    g.quadrature = Quadrature::GaussLegendre;
                else if (q == "monte-carlo")
                    g.quadrature = Quadrature::MonteCarlo;
                else
                    rd.error(p + "/quadrature", "expected \"gauss-legendre\" or \"monte-carlo\"");
            }
            if (s.contains("nodes_azimuth"))
                g.nodes_az = rd.count(s["nodes_azimuth"], p + "/nodes_azimuth");
            if (s.contains("nodes_elevation"))
                g.nodes_el = rd.count(s["nodes_elevation"], p + "/nodes_elevation");
            if (s.contains("nodes_distance"))
                g.nodes_d = rd.count(s["nodes_distance"], p + "/nodes_distance");
            if (s.contains("samples"))
                g.samples = rd.count(s["samples"], p + "/samples");
            if (s.contains("auto_refine"))
                g.auto_refine = rd.boolean(s["auto_refine"], p + "/auto_refine");
            if (s.contains("solid_angle_weighting"))
                g.solid_angle_weighting = rd.boolean(s["solid_angle_weighting"], p + "/solid_angle_weighting");
            rd.check(p, [&] { validate(g); });
        }

        if (root.contains("coupling"))
        {
            const json &c = root["coupling"];
            const std::string p = "/coupling";
            rd.object(c, p, {"enabled", "dissipation_resistance_ohm", "wire_radius_wavelengths",
                             "dipole_length_wavelengths", "form"});
            if (c.contains("enabled"))
                cfg.spec.coupling = rd.boolean(c["enabled"], p + "/enabled");
            DipoleConfig &d = cfg.spec.dipole;
            if (c.contains("dissipation_resistance_ohm"))
                d.dissipation_resistance = rd.number(c["dissipation_resistance_ohm"], p + "/dissipation_resistance_ohm");
            if (c.contains("wire_radius_wavelengths"))
                d.wire_radius_in_wavelengths = rd.positive(c["wire_radius_wavelengths"], p + "/wire_radius_wavelengths");
            if (c.contains("dipole_length_wavelengths"))
                d.length_in_wavelengths = rd.positive(c["dipole_length_wavelengths"], p + "/dipole_length_wavelengths");
            if (c.contains("form"))
            {
                const auto f = rd.string(c["form"], p + "/form");
                if (f == "congruence")
                    cfg.spec.coupling_form = CouplingForm::Congruence;
                else if (f == "literal")
                    cfg.spec.coupling_form = CouplingForm::Literal;
                else
                    rd.error(p + "/form", "expected \"congruence\" or \"literal\"");
            }
            rd.check(p, [&] { validate(d); });
        }

        if (root.contains("training"))
        {
            const json &t = root["training"];
            rd.object(t, "/training", {"pilot_length", "noise_variance"});
            if (t.contains("pilot_length"))
                cfg.pilot_length = static_cast<std::size_t>(rd.unsigned_integer(t["pilot_length"], "/training/pilot_length"));
            if (t.contains("noise_variance"))
                cfg.noise_variance = rd.positive(t["noise_variance"], "/training/noise_variance");
        }

        if (root.contains("sweep"))
        {
            const json &s = root["sweep"];
            const std::string p = "/sweep";
            rd.object(s, p, {"snr_db", "spacing_wavelengths", "ris_sizes"});
            if (s.contains("snr_db"))
            {
                cfg.snr_db.clear();
                const json &a = rd.array(s["snr_db"], p + "/snr_db");
                for (std::size_t i = 0; i < a.size(); ++i)
                    cfg.snr_db.push_back(rd.number(a[i], p + "/snr_db/" + std::to_string(i)));
            }
            if (s.contains("spacing_wavelengths"))
            {
                cfg.spacings.clear();
                const json &a = rd.array(s["spacing_wavelengths"], p + "/spacing_wavelengths");
                for (std::size_t i = 0; i < a.size(); ++i)
                    cfg.spacings.push_back(rd.positive(a[i], p + "/spacing_wavelengths/" + std::to_string(i)));
            }
            if (s.contains("ris_sizes"))
            {
                const json &a = rd.array(s["ris_sizes"], p + "/ris_sizes");
                for (std::size_t i = 0; i < a.size(); ++i)
                {
                    const std::string q = p + "/ris_sizes/" + std::to_string(i);
                    rd.array(a[i], q);
                    if (a[i].size() != 2)
                        rd.error(q, "expected [count_h, count_v]");
                    cfg.ris_sizes.emplace_back(rd.count(a[i][0], q + "/0"), rd.count(a[i][1], q + "/1"));
                }
            }
        }

        if (root.contains("estimators"))
        {
            const json &a = root["estimators"];
            if (!a.is_array())
                rd.error("/estimators", "expected an array");
            if (a.empty())
                rd.error("/estimators", "estimator list must not be empty");
            cfg.ls = cfg.mmse = false;
            bool rsls = false;
            for (std::size_t i = 0; i < a.size(); ++i)
            {
                const std::string q = "/estimators/" + std::to_string(i);
                const auto name = rd.string(a[i], q);
                if (name == "LS")
                    cfg.ls = true;
                else if (name == "MMSE")
                    cfg.mmse = true;
                else if (name == "RS-LS")
                    rsls = true;
                else
                    rd.error(q, "unknown estimator \"" + name + "\" (LS, MMSE, RS-LS)");
            }
            if (!rsls)
                cfg.rsls.clear();
        }

        if (root.contains("rsls_variants"))
        {
            const json &a = rd.array(root["rsls_variants"], "/rsls_variants");
            if (cfg.rsls.empty() && root.contains("estimators"))
                rd.error("/rsls_variants", "RS-LS variants given but RS-LS is not in the estimator list");
            cfg.rsls.clear();
            for (std::size_t i = 0; i < a.size(); ++i)
            {
                const std::string q = "/rsls_variants/" + std::to_string(i);
                rd.object(a[i], q, {"statistics", "mc_aware"});
                RslsVariant v;
                if (!a[i].contains("statistics") || !a[i].contains("mc_aware"))
                    rd.error(q, "each variant needs 'statistics' and 'mc_aware'");
                v.statistics = parse_statistics(rd, a[i]["statistics"], q + "/statistics");
                v.mc_aware = rd.boolean(a[i]["mc_aware"], q + "/mc_aware");
                cfg.rsls.push_back(v);
            }
        }

        if (root.contains("correlation_kinds"))
        {
            const json &a = rd.array(root["correlation_kinds"], "/correlation_kinds");
            cfg.exact = cfg.subspace = false;
            for (std::size_t i = 0; i < a.size(); ++i)
            {
                const auto kind = parse_statistics(rd, a[i], "/correlation_kinds/" + std::to_string(i));
                (kind == CorrelationKind::Subspace ? cfg.subspace : cfg.exact) = true;
            }
        }

        auto threshold = [&](const json &j, const std::string &ptr) {
            const double v = rd.number(j, ptr);
            if (!(v > 0.0 && v < 1.0))
                rd.error(ptr, "rank threshold must lie in (0, 1)");
            return v;
        };
        if (root.contains("rank_threshold"))
        {
            cfg.spec.rank_threshold = threshold(root["rank_threshold"], "/rank_threshold");
            cfg.rank_thresholds = {cfg.spec.rank_threshold};
        }
        if (root.contains("rank_thresholds"))
        {
            const json &a = rd.array(root["rank_thresholds"], "/rank_thresholds");
            cfg.rank_thresholds.clear();
            for (std::size_t i = 0; i < a.size(); ++i)
                cfg.rank_thresholds.push_back(threshold(a[i], "/rank_thresholds/" + std::to_string(i)));
        }

        if (root.contains("cluster_seeds"))
            cfg.cluster_seeds = rd.count(root["cluster_seeds"], "/cluster_seeds");
        if (root.contains("trials"))
            cfg.trials = rd.count(root["trials"], "/trials");
        if (root.contains("seed"))
            cfg.seed = rd.unsigned_integer(root["seed"], "/seed");
        if (root.contains("threads"))
            cfg.threads = static_cast<unsigned>(rd.count(root["threads"], "/threads"));
        if (root.contains("output_dir"))
        {
            const auto dir = rd.string(root["output_dir"], "/output_dir");
            if (dir.empty())
                rd.error("/output_dir", "must not be empty");
            cfg.output_dir = dir;
        }

        // Experiment-specific requirements
        const bool nmse = cfg.kind == ExperimentKind::NmseVsSnr || cfg.kind == ExperimentKind::NmseVsSpacing;
        if (nmse)
        {
            if (!cfg.ls && !cfg.mmse && cfg.rsls.empty())
                rd.error("/estimators", "no estimator selected");
            if (cfg.snr_db.empty())
                rd.error("/sweep", "missing sweep grid 'snr_db'");
        }
        else if (!cfg.exact && !cfg.subspace)
            rd.error("/correlation_kinds", "no correlation kind selected");
        if (cfg.kind != ExperimentKind::NmseVsSnr && cfg.spacings.empty())
            rd.error("/sweep", "missing sweep grid 'spacing_wavelengths'");
        if (cfg.kind == ExperimentKind::RankVsSpacing && cfg.ris_sizes.empty())
            cfg.ris_sizes = {{cfg.spec.ris.count_h, cfg.spec.ris.count_v}};
        if (cfg.kind == ExperimentKind::EigenSpectrum && !cfg.ris_sizes.empty())
            rd.error("/sweep/ris_sizes", "eigen-spectrum takes its size from arrays/ris");
        if (nmse)
        {
            const std::size_t kn = cfg.spec.ris.total() * cfg.spec.ue.total();
            if (cfg.pilot_length != 0 && cfg.pilot_length < kn)
                rd.error("/training/pilot_length", "pilot length " + std::to_string(cfg.pilot_length) +
                                                       " is below K N = " + std::to_string(kn));
        }
        return cfg;
    }

    ExperimentConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            fail(ErrorKind::Io, "cannot open config " + path.string());
        std::ostringstream buf;
        buf << f.rdbuf();
        return parse_config(buf.str());
    }

    namespace
    {
        json array_json(const ArrayConfig &a)
        {
            return {{"count_h", a.count_h}, {"count_v", a.count_v}, {"spacing_m", a.spacing}};
        }
    }

    std::string canonical_config(const ExperimentConfig &cfg)
    {
        const ScenarioSpec &s = cfg.spec;
        json j;
        j["experiment"] = experiment_name(cfg.kind);
        j["carrier_frequency_hz"] = s.sys.carrier_frequency;
        j["ris"] = array_json(s.ris);
        j["bs"] = array_json(s.bs);
        j["ue"] = array_json(s.ue);
        j["clusters"] = {{"count", s.clusters.cluster_count},
                         {"rays", s.clusters.rays_per_cluster},
                         {"azimuth", {s.clusters.azimuth.lo, s.clusters.azimuth.hi}},
                         {"elevation", {s.clusters.elevation.lo, s.clusters.elevation.hi}},
                         {"distance", {s.clusters.distance.lo, s.clusters.distance.hi}},
                         {"angular_spread", s.clusters.angular_spread_std},
                         {"distance_spread", s.clusters.distance_spread_std},
                         {"gain", s.clusters.average_gain},
                         {"solid_angle", s.clusters.solid_angle_weighting}};
        j["subspace"] = {{"quadrature", s.grid.quadrature == Quadrature::GaussLegendre ? "gl" : "mc"},
                         {"nodes", {s.grid.nodes_az, s.grid.nodes_el, s.grid.nodes_d}},
                         {"samples", s.grid.samples},
                         {"auto_refine", s.grid.auto_refine},
                         {"solid_angle", s.grid.solid_angle_weighting}};
        j["coupling"] = {{"enabled", s.coupling},
                         {"r_d", s.dipole.dissipation_resistance},
                         {"wire_radius", s.dipole.wire_radius_in_wavelengths},
                         {"length", s.dipole.length_in_wavelengths},
                         {"form", s.coupling_form == CouplingForm::Congruence ? "congruence" : "literal"}};
        j["rank_threshold"] = s.rank_threshold;
        j["rank_thresholds"] = cfg.rank_thresholds;
        j["snr_db"] = cfg.snr_db;
        j["spacings"] = cfg.spacings;
        j["ris_sizes"] = cfg.ris_sizes;
        j["ls"] = cfg.ls;
        j["mmse"] = cfg.mmse;
        json variants = json::array();
        for (const auto &v : cfg.rsls)
            variants.push_back({statistics_name(v.statistics), v.mc_aware});
        j["rsls"] = variants;
        j["exact"] = cfg.exact;
        j["subspace_kind"] = cfg.subspace;
        j["cluster_seeds"] = cfg.cluster_seeds;
        j["trials"] = cfg.trials;
        j["seed"] = cfg.seed;
        j["pilot_length"] = cfg.pilot_length;
        j["noise_variance"] = cfg.noise_variance;
        return j.dump();
    }

    std::string config_hash(const ExperimentConfig &cfg) { return hex64(fnv1a64(canonical_config(cfg))); }

    std::string version_string() { return RISNF_VERSION_STRING; }

    namespace
    {
        std::string variant_label(EstimatorVariant est, const std::optional<RslsVariant> &stats)
        {
            std::string label(estimator_name(est));
            if (stats)
            {
                label += ' ';
                label += statistics_name(stats->statistics);
                label += stats->mc_aware ? " MC-aware" : " MC-blind";
            }
            return label;
        }

        const std::vector<std::string> nmse_columns{"variant",          "estimator",        "statistics_kind",
                                                    "mc_aware",         "nmse_analytic_db", "nmse_expected_db",
                                                    "nmse_empirical_db", "nmse_seed_min_db", "nmse_seed_max_db",
                                                    "ris_rank",         "total_rank"};

        void append_nmse(std::vector<Cell> &row, const NmseRow &r)
        {
            row.emplace_back(variant_label(r.estimator, r.statistics));
            row.emplace_back(std::string(estimator_name(r.estimator)));
            row.emplace_back(r.statistics ? std::string(statistics_name(r.statistics->statistics)) : "none");
            row.emplace_back(r.statistics ? (r.statistics->mc_aware ? 1LL : 0LL) : 0LL);
            row.emplace_back(linear_to_db(r.analytic));
            row.emplace_back(linear_to_db(r.expected));
            row.emplace_back(linear_to_db(r.empirical));
            row.emplace_back(linear_to_db(r.seed_min));
            row.emplace_back(linear_to_db(r.seed_max));
            row.emplace_back(r.ris_rank);
            row.emplace_back(r.total_rank);
        }

        NmseRequest nmse_request(const ExperimentConfig &cfg)
        {
            NmseRequest req;
            req.spec = cfg.spec;
            req.snr_db = cfg.snr_db;
            req.ls = cfg.ls;
            req.mmse = cfg.mmse;
            req.rsls = cfg.rsls;
            req.cluster_seeds = cfg.cluster_seeds;
            req.trials = cfg.trials;
            req.seed = cfg.seed;
            req.threads = cfg.threads;
            req.noise_variance = cfg.noise_variance;
            req.pilot_length = cfg.pilot_length;
            return req;
        }

        SpectrumRequest spectrum_request(const ExperimentConfig &cfg)
        {
            SpectrumRequest req;
            req.spec = cfg.spec;
            req.spec.clusters.seed = cfg.seed;
            req.spec.grid.seed = cfg.seed;
            req.spacings = cfg.spacings;
            req.exact = cfg.exact;
            req.subspace = cfg.subspace;
            req.threads = cfg.threads;
            return req;
        }

        ResultTable eigen_spectrum(const ExperimentConfig &cfg, ArtifactCache &cache)
        {
            SpectrumRequest req = spectrum_request(cfg);
            req.sizes = {{cfg.spec.ris.count_h, cfg.spec.ris.count_v}};
            ResultTable t({"count_h", "count_v", "spacing_wavelengths", "statistics_kind", "mc", "index", "eigenvalue",
                           "eigenvalue_db"});
            for (const auto &c : correlation_spectra(req, cache))
            {
                const RankReport report = effective_rank(c.eigenvalues);
                for (Eigen::Index i = 0; i < c.eigenvalues.size(); ++i)
                    t.add_row({static_cast<long long>(c.count_h), static_cast<long long>(c.count_v), c.spacing,
                               std::string(statistics_name(c.kind)), c.mc ? 1LL : 0LL, static_cast<long long>(i + 1),
                               c.eigenvalues(i), report.eigenvalues_db(i)});
            }
            return t;
        }

        ResultTable rank_sweep(const ExperimentConfig &cfg, ArtifactCache &cache)
        {
            SpectrumRequest req = spectrum_request(cfg);
            req.sizes = cfg.ris_sizes;
            ResultTable t({"count_h", "count_v", "elements", "spacing_wavelengths", "statistics_kind", "mc", "threshold",
                           "rank"});
            for (const auto &c : correlation_spectra(req, cache))
                for (double eps : cfg.rank_thresholds)
                    t.add_row({static_cast<long long>(c.count_h), static_cast<long long>(c.count_v),
                               static_cast<long long>(c.count_h * c.count_v), c.spacing,
                               std::string(statistics_name(c.kind)), c.mc ? 1LL : 0LL, eps,
                               static_cast<long long>(effective_rank(c.eigenvalues, eps).rank)});
            return t;
        }

        ResultTable nmse_vs_snr(const ExperimentConfig &cfg, ArtifactCache &cache)
        {
            std::vector<std::string> cols{"snr_db"};
            cols.insert(cols.end(), nmse_columns.begin(), nmse_columns.end());
            ResultTable t(cols);
            for (const auto &r : evaluate_nmse(nmse_request(cfg), cache))
            {
                std::vector<Cell> row{r.snr_db};
                append_nmse(row, r);
                t.add_row(std::move(row));
            }
            return t;
        }

        ResultTable nmse_vs_spacing(const ExperimentConfig &cfg, ArtifactCache &cache)
        {
            std::vector<std::string> cols{"spacing_wavelengths", "snr_db"};
            cols.insert(cols.end(), nmse_columns.begin(), nmse_columns.end());
            ResultTable t(cols);
            for (double spacing : cfg.spacings)
            {
                NmseRequest req = nmse_request(cfg);
                const SystemConfig &sys = req.spec.sys;
                auto at = [&](const ArrayConfig &a) {
                    return ArrayConfig::from_wavelengths(a.role, a.count_h, a.count_v, spacing, sys);
                };
                req.spec.ris = at(req.spec.ris);
                req.spec.bs = at(req.spec.bs);
                req.spec.ue = at(req.spec.ue);
                for (const auto &r : evaluate_nmse(req, cache))
                {
                    std::vector<Cell> row{spacing, r.snr_db};
                    append_nmse(row, r);
                    t.add_row(std::move(row));
                }
            }
            return t;
        }
    }

    ResultTable run_experiment(const ExperimentConfig &cfg, ArtifactCache &cache)
    {
        ResultTable t;
        switch (cfg.kind)
        {
        case ExperimentKind::EigenSpectrum: t = eigen_spectrum(cfg, cache); break;
        case ExperimentKind::RankVsSpacing: t = rank_sweep(cfg, cache); break;
        case ExperimentKind::NmseVsSnr: t = nmse_vs_snr(cfg, cache); break;
        case ExperimentKind::NmseVsSpacing: t = nmse_vs_spacing(cfg, cache); break;
        }
        t.set_metadata("experiment", std::string(experiment_name(cfg.kind)));
        t.set_metadata("config_hash", config_hash(cfg));
        t.set_metadata("seed", std::to_string(cfg.seed));
        t.set_metadata("version", version_string());
        if (cfg.kind == ExperimentKind::NmseVsSnr || cfg.kind == ExperimentKind::NmseVsSpacing)
        {
            t.set_metadata("cluster_seeds", std::to_string(cfg.cluster_seeds));
            t.set_metadata("trials", std::to_string(cfg.trials));
        }
        t.set_metadata("timestamp", utc_timestamp());
        return t;
    }

    PlotSpec default_plot(ExperimentKind kind)
    {
        PlotSpec p;
        switch (kind)
        {
        case ExperimentKind::EigenSpectrum:
            p.title = "Correlation eigenvalues";
            p.x = "index";
            p.y = {{"eigenvalue_db", false, ""}};
            p.series = {"statistics_kind", "mc"};
            p.facet = "spacing_wavelengths";
            p.x_label = "eigenvalue index";
            p.y_label = "eigenvalue (dB)";
            p.y_floor = -100.0;
            break;
        case ExperimentKind::RankVsSpacing:
            p.title = "Effective rank versus spacing";
            p.x = "spacing_wavelengths";
            p.y = {{"rank", false, ""}};
            p.series = {"count_h", "count_v", "statistics_kind", "mc"};
            p.facet = "threshold";
            p.x_label = "spacing (wavelengths)";
            p.y_label = "effective rank";
            break;
        case ExperimentKind::NmseVsSnr:
            p.title = "NMSE versus SNR";
            p.x = "snr_db";
            p.y = {{"nmse_empirical_db", false, ""}, {"nmse_analytic_db", true, " (analytic)"}};
            p.series = {"variant"};
            p.x_label = "SNR (dB)";
            p.y_label = "NMSE (dB)";
            break;
        case ExperimentKind::NmseVsSpacing:
            p.title = "NMSE versus spacing";
            p.x = "spacing_wavelengths";
            p.y = {{"nmse_empirical_db", false, ""}, {"nmse_analytic_db", true, " (analytic)"}};
            p.series = {"variant"};
            p.facet = "snr_db";
            p.x_label = "spacing (wavelengths)";
            p.y_label = "NMSE (dB)";
            break;
        }
        return p;
    }

    ExperimentOutputs run_and_write(const ExperimentConfig &cfg, bool plot)
    {
        std::error_code ec;
        std::filesystem::create_directories(cfg.output_dir, ec);
        if (ec)
            fail(ErrorKind::Io, "cannot create " + cfg.output_dir.string() + ": " + ec.message());
        ArtifactCache cache(cfg.output_dir / "cache");
        const ResultTable table = run_experiment(cfg, cache);

        ExperimentOutputs out;
        const std::string stem(experiment_name(cfg.kind));
        out.csv = cfg.output_dir / (stem + ".csv");
        write_csv(table, out.csv);
        if (plot)
        {
            out.svg = cfg.output_dir / (stem + ".svg");
            plot_csv(out.csv, *out.svg, default_plot(cfg.kind));
        }
        out.rows = table.rows().size();
        out.cache_hits = cache.hits();
        out.cache_misses = cache.misses();
        return out;
    }
}
