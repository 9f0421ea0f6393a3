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

#ifndef RISNF_CORRELATION_HPP
#define RISNF_CORRELATION_HPP

#include <cstdint>
#include <vector>

#include "risnf/geometry.hpp"
#include "risnf/types.hpp"

namespace risnf
{
    struct Interval
    {
        double lo = 0.0;
        double hi = 0.0;

        double width() const { return hi - lo; }
    };

    struct CorrelationMatrix
    {
        CMatrix entries;
        CorrelationKind kind = CorrelationKind::ExactClustered;
        bool with_coupling = false;

        Eigen::Index dimension() const { return entries.rows(); }
        double trace() const { return entries.trace().real(); }
    };

    // Scattering clusters drawn uniformly from a rectangular region, each
    // realized by Gaussian-perturbed rays. Rays leaving the angular domain
    // or reaching d <= 0 are dropped.
    struct ClusterSet
    {
        std::size_t cluster_count = 10;
        Interval azimuth{-pi / 2.0, pi / 2.0};
        Interval elevation{-pi / 2.0, pi / 2.0};
        Interval distance{10.0, 20.0};
        std::size_t rays_per_cluster = 100;
        double angular_spread_std = 5.0 * pi / 180.0;
        double distance_spread_std = 0.5;
        std::uint64_t seed = 1;
        double average_gain = 1.0;
        bool solid_angle_weighting = false; // cluster elevations uniform in sin(el)
    };

    void validate(const ClusterSet &clusters);

    std::vector<ScattererLocation> draw_cluster_rays(const ClusterSet &clusters);

    // Equal-weight sum of a a^H over the rays, trace normalized to K
    CorrelationMatrix correlation_from_rays(const SystemConfig &sys, const ArrayConfig &cfg,
                                            const std::vector<ScattererLocation> &rays);

    CorrelationMatrix synthesize_cluster_correlation(const SystemConfig &sys, const ArrayConfig &cfg,
                                                     const ClusterSet &clusters);

    enum class Quadrature
    {
        GaussLegendre,
        MonteCarlo
    };

    struct SubspaceIntegrationGrid
    {
        std::size_t nodes_az = 24;
        std::size_t nodes_el = 24;
        std::size_t nodes_d = 8;
        Quadrature quadrature = Quadrature::GaussLegendre;
        std::uint64_t seed = 1;
        std::size_t samples = 100000; // Monte Carlo only
        bool auto_refine = true;      // raise node counts to resolve the aperture
        bool solid_angle_weighting = false;
    };

    void validate(const SubspaceIntegrationGrid &grid);

    // Node counts actually used after aperture-driven refinement
    SubspaceIntegrationGrid effective_grid(const SystemConfig &sys, const ArrayConfig &cfg,
                                           const SubspaceIntegrationGrid &grid, const Interval &distance_range);

    // Uniform-density integral of a a^H over the angular domain times
    // distance_range, trace normalized to K
    CorrelationMatrix subspace_correlation(const SystemConfig &sys, const ArrayConfig &cfg,
                                           const SubspaceIntegrationGrid &grid, const Interval &distance_range);

    // r_a kron r_b, kept factored
    struct KronCorrelation
    {
        CMatrix a;
        CMatrix b;

        double trace() const;
        RVector eigenvalues() const;
        CMatrix materialize() const;
    };

    KronCorrelation kron_correlation(const CMatrix &r_a, const CMatrix &r_b);

    // Cascaded covariance (R_HR o R_FR) kron R_HU kron R_FB, index order
    // k * (N M) + n * M + m
    struct FactoredCovariance
    {
        CMatrix ris; // K x K
        CMatrix ue;  // N x N
        CMatrix bs;  // M x M

        Eigen::Index dimension() const { return ris.rows() * ue.rows() * bs.rows(); }
        double trace() const;
        RVector eigenvalues() const; // via the factor spectra
        CMatrix materialize() const; // refuses dimensions above 4096
    };

    FactoredCovariance cascaded_covariance(const CMatrix &r_hr, const CMatrix &r_fr, const CMatrix &r_hu,
                                           const CMatrix &r_fb);

    struct PsdReport
    {
        double hermitian_defect = 0.0;   // max |R - R^H| / max |R|
        double min_eigenvalue_ratio = 0; // lambda_min / lambda_max
        bool hermitian(double tol = 1e-12) const { return hermitian_defect <= tol; }
        bool psd(double tol = 1e-10) const { return min_eigenvalue_ratio >= -tol; }
    };

    PsdReport check_correlation(const CMatrix &r);

    // Rescales to trace == target and symmetrizes
    void normalize_trace(CMatrix &r, double target);
}

#endif
