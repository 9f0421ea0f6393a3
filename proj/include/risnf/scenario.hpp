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

#ifndef RISNF_SCENARIO_HPP
#define RISNF_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "risnf/cache.hpp"
#include "risnf/correlation.hpp"
#include "risnf/coupling.hpp"
#include "risnf/estimators.hpp"
#include "risnf/geometry.hpp"

namespace risnf
{
    // Everything the statistics of one RIS/BS/UE deployment depend on
    struct ScenarioSpec
    {
        SystemConfig sys;
        ArrayConfig ris{ArrayRole::RIS, 10, 10, 0.0125};
        ArrayConfig bs{ArrayRole::BS, 4, 4, 0.025};
        ArrayConfig ue{ArrayRole::UE, 2, 2, 0.0125};
        ClusterSet clusters;           // seed is replaced per link
        SubspaceIntegrationGrid grid;  // subspace statistics
        DipoleConfig dipole;
        bool coupling = true;
        CouplingForm coupling_form = CouplingForm::Congruence;
        double rank_threshold = default_rank_threshold;
    };

    std::string cache_key(const SystemConfig &sys, const ArrayConfig &array);
    std::string cache_key(const ClusterSet &clusters);
    std::string cache_key(const SubspaceIntegrationGrid &grid, const Interval &range);
    std::string cache_key(const DipoleConfig &dipole);

    CorrelationMatrix cached_cluster_correlation(ArtifactCache &cache, const SystemConfig &sys, const ArrayConfig &array,
                                                 const ClusterSet &clusters);
    CorrelationMatrix cached_subspace_correlation(ArtifactCache &cache, const SystemConfig &sys,
                                                  const ArrayConfig &array, const SubspaceIntegrationGrid &grid,
                                                  const Interval &range);
    CouplingMatrix cached_coupling(ArtifactCache &cache, const DipoleConfig &dipole, const SystemConfig &sys,
                                   const ArrayConfig &array);

    // Independent cluster seed for link side `link` (0: UE-RIS at the RIS,
    // 1: RIS-BS at the RIS, 2: UE side, 3: BS side) of cluster draw `index`
    std::uint64_t link_seed(std::uint64_t base, std::size_t index, int link);

    struct RslsVariant
    {
        CorrelationKind statistics = CorrelationKind::ExactClustered;
        bool mc_aware = true;
    };

    struct NmseRequest
    {
        ScenarioSpec spec;
        std::vector<double> snr_db;
        bool ls = true;
        bool mmse = true; // exact statistics, coupled when the spec has coupling
        std::vector<RslsVariant> rsls;
        std::size_t cluster_seeds = 10;
        std::size_t trials = 200;
        std::uint64_t seed = 1;
        unsigned threads = 1;
        double noise_variance = 1.0;
        std::size_t pilot_length = 0; // 0 selects K N
    };

    struct NmseRow
    {
        double snr_db = 0.0;
        EstimatorVariant estimator = EstimatorVariant::LS;
        std::optional<RslsVariant> statistics; // absent for LS
        double analytic = 0.0;  // closed-form NMSE (linear), mean over cluster draws
        double expected = 0.0;  // including subspace mismatch bias
        double empirical = 0.0; // pooled Monte Carlo NMSE
        double seed_min = 0.0;  // per cluster draw extremes of the Monte Carlo NMSE
        double seed_max = 0.0;
        double ris_rank = 0.0;   // mean RIS subspace rank (RS-LS)
        double total_rank = 0.0; // mean r_RIS r_UE r_BS (RS-LS)
    };

    std::vector<NmseRow> evaluate_nmse(const NmseRequest &request, ArtifactCache &cache);

    struct SpectrumRequest
    {
        ScenarioSpec spec; // the RIS array's counts and spacing are swept
        std::vector<std::pair<std::size_t, std::size_t>> sizes;
        std::vector<double> spacings; // wavelengths
        bool exact = true;
        bool subspace = true;
        unsigned threads = 1;
    };

    struct SpectrumCurve
    {
        std::size_t count_h = 0;
        std::size_t count_v = 0;
        double spacing = 0.0; // wavelengths
        CorrelationKind kind = CorrelationKind::ExactClustered;
        bool mc = false;
        RVector eigenvalues; // descending, trace normalized to K
        double hermitian_defect = 0.0;
    };

    std::vector<SpectrumCurve> correlation_spectra(const SpectrumRequest &request, ArtifactCache &cache);
}

#endif
