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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "risnf/errors.hpp"
#include "risnf/montecarlo.hpp"
#include "risnf/rng.hpp"
#include "risnf/scenario.hpp"
#include "risnf/spectral.hpp"
#include "risnf/training.hpp"

namespace risnf
{
    namespace
    {
        std::string fmt(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        // Statistics used to pick one RS-LS subspace triple
        struct BasisTriple
        {
            SubspaceBasis ris, ue, bs;
        };

        BasisTriple select_triple(const CMatrix &ris, const CMatrix &ue, const CMatrix &bs, double threshold,
                                  CorrelationKind kind, bool mc)
        {
            return {select_subspace(hermitian_eig(ris), threshold, kind, mc),
                    select_subspace(hermitian_eig(ue), threshold, kind, mc),
                    select_subspace(hermitian_eig(bs), threshold, kind, mc)};
        }

        CMatrix coupled_or_plain(const CorrelationMatrix &r, const CouplingMatrix *m, CouplingForm form)
        {
            return m ? coupled_correlation(r, *m, form).entries : r.entries;
        }

        // Per-trial squared errors, laid out [snr][estimator]
        using TrialErrors = std::vector<ErrorAccumulator>;

        double mean(const std::vector<double> &v)
        {
            double s = 0.0;
            for (double x : v)
                s += x;
            return v.empty() ? 0.0 : s / static_cast<double>(v.size());
        }
    }

    std::string cache_key(const SystemConfig &sys, const ArrayConfig &array)
    {
        return "fc=" + fmt(sys.carrier_frequency) + ";role=" + std::string(array_role_name(array.role)) +
               ";h=" + std::to_string(array.count_h) + ";v=" + std::to_string(array.count_v) +
               ";spacing=" + fmt(array.spacing);
    }

    std::string cache_key(const ClusterSet &c)
    {
        return "clusters=" + std::to_string(c.cluster_count) + ";az=" + fmt(c.azimuth.lo) + "," + fmt(c.azimuth.hi) +
               ";el=" + fmt(c.elevation.lo) + "," + fmt(c.elevation.hi) + ";d=" + fmt(c.distance.lo) + "," +
               fmt(c.distance.hi) + ";rays=" + std::to_string(c.rays_per_cluster) + ";sa=" + fmt(c.angular_spread_std) +
               ";sd=" + fmt(c.distance_spread_std) + ";seed=" + std::to_string(c.seed) +
               ";gain=" + fmt(c.average_gain) + ";solid=" + std::to_string(c.solid_angle_weighting);
    }

    std::string cache_key(const SubspaceIntegrationGrid &g, const Interval &range)
    {
        return "grid=" + std::to_string(g.nodes_az) + "," + std::to_string(g.nodes_el) + "," +
               std::to_string(g.nodes_d) + ";quad=" + std::to_string(static_cast<int>(g.quadrature)) +
               ";seed=" + std::to_string(g.seed) + ";samples=" + std::to_string(g.samples) +
               ";auto=" + std::to_string(g.auto_refine) + ";solid=" + std::to_string(g.solid_angle_weighting) +
               ";range=" + fmt(range.lo) + "," + fmt(range.hi);
    }

    std::string cache_key(const DipoleConfig &d)
    {
        return "dipole=" + fmt(d.length_in_wavelengths) + ";rd=" + fmt(d.dissipation_resistance) +
               ";radius=" + fmt(d.wire_radius_in_wavelengths);
    }

    CorrelationMatrix cached_cluster_correlation(ArtifactCache &cache, const SystemConfig &sys, const ArrayConfig &array,
                                                 const ClusterSet &clusters)
    {
        const std::string key = "exact|" + cache_key(sys, array) + "|" + cache_key(clusters);
        CorrelationMatrix out;
        out.kind = CorrelationKind::ExactClustered;
        out.entries = cache.get_or_compute(key, MatrixTag::Correlation, correlation_kind_byte(out.kind), [&] {
            return synthesize_cluster_correlation(sys, array, clusters).entries;
        });
        return out;
    }

    CorrelationMatrix cached_subspace_correlation(ArtifactCache &cache, const SystemConfig &sys,
                                                  const ArrayConfig &array, const SubspaceIntegrationGrid &grid,
                                                  const Interval &range)
    {
        const std::string key = "subspace|" + cache_key(sys, array) + "|" + cache_key(grid, range);
        CorrelationMatrix out;
        out.kind = CorrelationKind::Subspace;
        out.entries = cache.get_or_compute(key, MatrixTag::Correlation, correlation_kind_byte(out.kind), [&] {
            return subspace_correlation(sys, array, grid, range).entries;
        });
        return out;
    }

    CouplingMatrix cached_coupling(ArtifactCache &cache, const DipoleConfig &dipole, const SystemConfig &sys,
                                   const ArrayConfig &array)
    {
        const std::string key = "coupling|" + cache_key(sys, array) + "|" + cache_key(dipole);
        const CMatrix z = cache.get_or_compute(key, MatrixTag::Impedance, 0,
                                               [&] { return build_impedance_matrix(dipole, sys, array); });
        return coupling_matrix(z, dipole.dissipation_resistance, [&](const CMatrix &m) {
            return cache.get_or_compute(key, MatrixTag::Coupling, 1, [&] { return principal_sqrt(m); });
        });
    }

    std::uint64_t link_seed(std::uint64_t base, std::size_t index, int link)
    {
        return Rng::mix64(base ^ Rng::mix64(static_cast<std::uint64_t>(index) * 8 + static_cast<std::uint64_t>(link) + 1));
    }

    std::vector<NmseRow> evaluate_nmse(const NmseRequest &req, ArtifactCache &cache)
    {
        const ScenarioSpec &spec = req.spec;
        require(!req.snr_db.empty(), "SNR grid must not be empty");
        require(req.ls || req.mmse || !req.rsls.empty(), "estimator list must not be empty");
        require(req.cluster_seeds >= 1 && req.trials >= 1, "need at least one cluster draw and one trial");
        validate(spec.ris);
        validate(spec.bs);
        validate(spec.ue);

        const std::size_t k = spec.ris.total(), n = spec.ue.total(), m = spec.bs.total();
        const std::size_t pilot_length = req.pilot_length == 0 ? k * n : req.pilot_length;
        TrainingDesign base_design{pilot_length, 1.0, req.noise_variance};
        validate(base_design, k, n);
        const PhaseSchedule phi = dft_phase_schedule(k, pilot_length, n);
        const PilotMatrix x = orthonormal_pilots(n);
        const FactoredGram g = gram(phi, n, m);

        std::optional<CouplingMatrix> m_ris, m_ue, m_bs;
        if (spec.coupling)
        {
            m_ris = cached_coupling(cache, spec.dipole, spec.sys, spec.ris);
            m_ue = cached_coupling(cache, spec.dipole, spec.sys, spec.ue);
            m_bs = cached_coupling(cache, spec.dipole, spec.sys, spec.bs);
        }
        else
        {
            m_ris = identity_coupling(static_cast<Eigen::Index>(k));
            m_ue = identity_coupling(static_cast<Eigen::Index>(n));
            m_bs = identity_coupling(static_cast<Eigen::Index>(m));
        }
        const CouplingMatrix *cr = spec.coupling ? &*m_ris : nullptr;
        const CouplingMatrix *cu = spec.coupling ? &*m_ue : nullptr;
        const CouplingMatrix *cb = spec.coupling ? &*m_bs : nullptr;

        // Subspace statistics depend on geometry only
        bool need_subspace = false;
        for (const auto &v : req.rsls)
            need_subspace |= v.statistics == CorrelationKind::Subspace;
        std::optional<BasisTriple> sub_aware, sub_blind;
        if (need_subspace)
        {
            const Interval range = spec.clusters.distance;
            const auto s_ris = cached_subspace_correlation(cache, spec.sys, spec.ris, spec.grid, range);
            const auto s_ue = cached_subspace_correlation(cache, spec.sys, spec.ue, spec.grid, range);
            const auto s_bs = cached_subspace_correlation(cache, spec.sys, spec.bs, spec.grid, range);
            const CMatrix ris_plain = s_ris.entries.cwiseProduct(s_ris.entries);
            sub_blind = select_triple(ris_plain, s_ue.entries, s_bs.entries, spec.rank_threshold,
                                      CorrelationKind::Subspace, false);
            const CMatrix ris_mc = coupled_or_plain(s_ris, cr, spec.coupling_form);
            sub_aware = select_triple(ris_mc.cwiseProduct(ris_mc), coupled_or_plain(s_ue, cu, spec.coupling_form),
                                      coupled_or_plain(s_bs, cb, spec.coupling_form), spec.rank_threshold,
                                      CorrelationKind::Subspace, spec.coupling);
        }

        const std::size_t snrs = req.snr_db.size();
        const std::size_t estimators = (req.ls ? 1 : 0) + (req.mmse ? 1 : 0) + req.rsls.size();
        const std::size_t cells = snrs * estimators;

        std::vector<ErrorAccumulator> pooled(cells);
        std::vector<std::vector<double>> per_seed_nmse(cells), analytic(cells), expected(cells);
        std::vector<std::vector<double>> ris_ranks(req.rsls.size()), total_ranks(req.rsls.size());

        for (std::size_t si = 0; si < req.cluster_seeds; ++si)
        {
            auto clusters_for = [&](int link) {
                ClusterSet c = spec.clusters;
                c.seed = link_seed(req.seed, si, link);
                return c;
            };
            const auto r_hr = cached_cluster_correlation(cache, spec.sys, spec.ris, clusters_for(0));
            const auto r_fr = cached_cluster_correlation(cache, spec.sys, spec.ris, clusters_for(1));
            const auto r_hu = cached_cluster_correlation(cache, spec.sys, spec.ue, clusters_for(2));
            const auto r_fb = cached_cluster_correlation(cache, spec.sys, spec.bs, clusters_for(3));

            // Coupling transforms for data generation, trace-normalized per link
            CMatrix t_hr = normalized_coupling_transform(*m_ris, r_hr.entries);
            CMatrix t_fr = normalized_coupling_transform(*m_ris, r_fr.entries);
            const CMatrix t_hu = normalized_coupling_transform(*m_ue, r_hu.entries);
            const CMatrix t_fb = normalized_coupling_transform(*m_bs, r_fb.entries);
            CMatrix c_hr = hermitian_part(t_hr * r_hr.entries * t_hr.adjoint());
            CMatrix c_fr = hermitian_part(t_fr * r_fr.entries * t_fr.adjoint());
            // Keep tr(R_cc) = K N M with coupling as well
            const double hadamard_trace = c_hr.cwiseProduct(c_fr).trace().real();
            const double ris_scale = std::sqrt(static_cast<double>(k) / hadamard_trace);
            t_hr *= std::sqrt(ris_scale);
            t_fr *= std::sqrt(ris_scale);
            c_hr *= ris_scale;
            c_fr *= ris_scale;
            const CMatrix c_hu = hermitian_part(t_hu * r_hu.entries * t_hu.adjoint());
            const CMatrix c_fb = hermitian_part(t_fb * r_fb.entries * t_fb.adjoint());

            const FactoredCovariance r_true = cascaded_covariance(c_hr, c_fr, c_hu, c_fb);
            const ChannelSampler h_sampler{t_hr * psd_sqrt(r_hr.entries), t_hu * psd_sqrt(r_hu.entries)};
            const ChannelSampler f_sampler{t_fb * psd_sqrt(r_fb.entries), t_fr * psd_sqrt(r_fr.entries)};

            // RS-LS bases for this draw
            std::optional<BasisTriple> exact_aware, exact_blind;
            std::vector<const BasisTriple *> triples;
            for (const auto &v : req.rsls)
            {
                if (v.statistics == CorrelationKind::Subspace)
                {
                    triples.push_back(v.mc_aware ? &*sub_aware : &*sub_blind);
                    continue;
                }
                if (v.mc_aware)
                {
                    if (!exact_aware)
                    {
                        const CMatrix a = coupled_or_plain(r_hr, cr, spec.coupling_form);
                        const CMatrix b = coupled_or_plain(r_fr, cr, spec.coupling_form);
                        exact_aware = select_triple(a.cwiseProduct(b), coupled_or_plain(r_hu, cu, spec.coupling_form),
                                                    coupled_or_plain(r_fb, cb, spec.coupling_form), spec.rank_threshold,
                                                    CorrelationKind::ExactClustered, spec.coupling);
                    }
                    triples.push_back(&*exact_aware);
                }
                else
                {
                    if (!exact_blind)
                        exact_blind = select_triple(r_hr.entries.cwiseProduct(r_fr.entries), r_hu.entries, r_fb.entries,
                                                    spec.rank_threshold, CorrelationKind::ExactClustered, false);
                    triples.push_back(&*exact_blind);
                }
            }
            std::vector<RslsEstimator> rsls;
            for (std::size_t v = 0; v < triples.size(); ++v)
            {
                const BasisTriple &t = *triples[v];
                rsls.emplace_back(t.ris, t.ue, t.bs, g, 1.0);
                ris_ranks[v].push_back(static_cast<double>(t.ris.rank()));
                total_ranks[v].push_back(static_cast<double>(t.ris.rank() * t.ue.rank() * t.bs.rank()));
            }

            std::vector<MmseEstimator> mmse;
            if (req.mmse)
                for (double snr_db : req.snr_db)
                    mmse.emplace_back(r_true, g,
                                      TrainingDesign::from_snr_db(pilot_length, snr_db, req.noise_variance));

            // Closed forms for this draw
            const double tr_true = r_true.trace();
            for (std::size_t s = 0; s < snrs; ++s)
            {
                const double gamma = db_to_linear(req.snr_db[s]);
                std::size_t e = 0;
                if (req.ls)
                {
                    const double v = ls_error_covariance(phi, gamma, n, m).trace() / tr_true;
                    analytic[s * estimators + e].push_back(v);
                    expected[s * estimators + e].push_back(v);
                    ++e;
                }
                if (req.mmse)
                {
                    const double v = mmse_error_covariance(r_true, g, gamma).trace / tr_true;
                    analytic[s * estimators + e].push_back(v);
                    expected[s * estimators + e].push_back(v);
                    ++e;
                }
                for (const BasisTriple *t : triples)
                {
                    analytic[s * estimators + e].push_back(rsls_error_covariance(t->ris, phi, gamma, n, m).trace() /
                                                           tr_true);
                    expected[s * estimators + e].push_back(
                        rsls_expected_error_trace(t->ris, t->ue, t->bs, g, r_true, gamma) / tr_true);
                    ++e;
                }
            }

            const std::uint64_t trial_master = link_seed(req.seed, si, 7);
            auto run_trial = [&](std::size_t trial) {
                Rng rng = Rng::substream(trial_master, trial);
                const CMatrix h = h_sampler.sample(rng);
                const CMatrix f = f_sampler.sample(rng);
                const ChannelRealization ch = build_cascaded(h, f);
                const CVector a = apply_adjoint(phi, x, noiseless_observations(phi, x, ch));
                const CVector b = apply_adjoint(phi, x, unit_noise(static_cast<Eigen::Index>(m),
                                                                   static_cast<Eigen::Index>(pilot_length), rng));

                CVector ls_a, ls_b;
                if (req.ls)
                {
                    ls_a = ls_estimate(a, g, 1.0);
                    ls_b = ls_estimate(b, g, 1.0);
                }
                std::vector<CVector> rs_a, rs_b;
                for (const auto &est : rsls)
                {
                    rs_a.push_back(est.estimate(a));
                    rs_b.push_back(est.estimate(b));
                }

                TrialErrors out(cells);
                const double sigma = std::sqrt(req.noise_variance);
                for (std::size_t s = 0; s < snrs; ++s)
                {
                    const double p = db_to_linear(req.snr_db[s]) * req.noise_variance;
                    const double noise_gain = sigma / std::sqrt(p);
                    std::size_t e = 0;
                    if (req.ls)
                        out[s * estimators + e++].add(ls_a + noise_gain * ls_b, ch.c);
                    if (req.mmse)
                        out[s * estimators + e++].add(mmse[s].estimate(std::sqrt(p) * a + sigma * b), ch.c);
                    for (std::size_t v = 0; v < rsls.size(); ++v)
                        out[s * estimators + e++].add(rs_a[v] + noise_gain * rs_b[v], ch.c);
                }
                return out;
            };

            const auto results = run_indexed(req.trials, req.threads, run_trial);
            std::vector<ErrorAccumulator> seed_acc(cells);
            for (const auto &trial : results)
                for (std::size_t i = 0; i < cells; ++i)
                    seed_acc[i].merge(trial[i]);
            for (std::size_t i = 0; i < cells; ++i)
            {
                pooled[i].merge(seed_acc[i]);
                per_seed_nmse[i].push_back(seed_acc[i].nmse());
            }
        }

        std::vector<NmseRow> rows;
        for (std::size_t s = 0; s < snrs; ++s)
        {
            std::size_t e = 0;
            auto emit = [&](EstimatorVariant est, std::optional<RslsVariant> stats, std::size_t variant_index) {
                const std::size_t i = s * estimators + e++;
                NmseRow row;
                row.snr_db = req.snr_db[s];
                row.estimator = est;
                row.statistics = stats;
                row.analytic = mean(analytic[i]);
                row.expected = mean(expected[i]);
                row.empirical = pooled[i].nmse();
                row.seed_min = *std::min_element(per_seed_nmse[i].begin(), per_seed_nmse[i].end());
                row.seed_max = *std::max_element(per_seed_nmse[i].begin(), per_seed_nmse[i].end());
                if (est == EstimatorVariant::RSLS)
                {
                    row.ris_rank = mean(ris_ranks[variant_index]);
                    row.total_rank = mean(total_ranks[variant_index]);
                }
                rows.push_back(row);
            };
            if (req.ls)
                emit(EstimatorVariant::LS, std::nullopt, 0);
            if (req.mmse)
                emit(EstimatorVariant::MMSE, RslsVariant{CorrelationKind::ExactClustered, spec.coupling}, 0);
            for (std::size_t v = 0; v < req.rsls.size(); ++v)
                emit(EstimatorVariant::RSLS, req.rsls[v], v);
        }
        return rows;
    }

    std::vector<SpectrumCurve> correlation_spectra(const SpectrumRequest &req, ArtifactCache &cache)
    {
        require(!req.sizes.empty() && !req.spacings.empty(), "size and spacing grids must not be empty");
        const ScenarioSpec &spec = req.spec;
        const std::size_t points = req.sizes.size() * req.spacings.size();

        auto compute = [&](std::size_t p) {
            const auto [h, v] = req.sizes[p / req.spacings.size()];
            const double spacing = req.spacings[p % req.spacings.size()];
            const ArrayConfig array = ArrayConfig::from_wavelengths(ArrayRole::RIS, h, v, spacing, spec.sys);
            std::optional<CouplingMatrix> coupling;
            if (spec.coupling)
                coupling = cached_coupling(cache, spec.dipole, spec.sys, array);

            std::vector<SpectrumCurve> curves;
            auto add = [&](const CorrelationMatrix &r) {
                auto push = [&](const CMatrix &entries, bool mc) {
                    SpectrumCurve c;
                    c.count_h = h;
                    c.count_v = v;
                    c.spacing = spacing;
                    c.kind = r.kind;
                    c.mc = mc;
                    c.eigenvalues = hermitian_eigenvalues(entries);
                    c.hermitian_defect = relative_hermitian_defect(entries);
                    curves.push_back(std::move(c));
                };
                push(r.entries, false);
                if (coupling)
                    push(coupled_correlation(r, *coupling, spec.coupling_form).entries, true);
            };
            if (req.exact)
                add(cached_cluster_correlation(cache, spec.sys, array, spec.clusters));
            if (req.subspace)
                add(cached_subspace_correlation(cache, spec.sys, array, spec.grid, spec.clusters.distance));
            return curves;
        };

        std::vector<SpectrumCurve> out;
        for (auto &group : run_indexed(points, req.threads, compute))
            for (auto &c : group)
                out.push_back(std::move(c));
        return out;
    }
}
