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
#include <memory>
#include <string>

#include <gsl/gsl_integration.h>

#include "risnf/correlation.hpp"
#include "risnf/errors.hpp"
#include "risnf/rng.hpp"
#include "risnf/spectral.hpp"

namespace risnf
{
    namespace
    {
        // Columns per rank update; fixed so results do not depend on threads
        constexpr Eigen::Index accumulation_chunk = 512;

        // Angular Gauss-Legendre nodes per unit of k * aperture
        constexpr double angular_nodes_per_phase = 0.6;

        struct WeightedScatterer
        {
            ScattererLocation location;
            double weight;
        };

        // R = sum_i w_i a_i a_i^H, accumulated chunk by chunk in input order
        CMatrix accumulate(const SystemConfig &sys, const ArrayConfig &cfg, const std::vector<WeightedScatterer> &points)
        {
            const auto k = static_cast<Eigen::Index>(cfg.total());
            CMatrix r = CMatrix::Zero(k, k);
            std::vector<ScattererLocation> chunk;
            chunk.reserve(accumulation_chunk);
            for (std::size_t start = 0; start < points.size(); start += accumulation_chunk)
            {
                const std::size_t stop = std::min(points.size(), start + accumulation_chunk);
                chunk.clear();
                for (std::size_t i = start; i < stop; ++i)
                    chunk.push_back(points[i].location);
                CMatrix a = nearfield_response_matrix(sys, cfg, chunk);
                for (std::size_t i = start; i < stop; ++i)
                    a.col(static_cast<Eigen::Index>(i - start)) *= std::sqrt(points[i].weight);
                r.selfadjointView<Eigen::Lower>().rankUpdate(a);
            }
            CMatrix full = r.selfadjointView<Eigen::Lower>();
            return full;
        }

        bool ray_in_domain(const ScattererLocation &s)
        {
            return in_angular_domain(s.azimuth, s.elevation) && s.distance > 0.0;
        }

        struct GaussLegendre
        {
            std::vector<double> nodes;
            std::vector<double> weights;
        };

        GaussLegendre gauss_legendre(std::size_t n, double lo, double hi)
        {
            std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
                gsl_integration_glfixed_table_alloc(n), &gsl_integration_glfixed_table_free);
            if (!table)
                fail(ErrorKind::InvalidArgument, "cannot build a Gauss-Legendre rule with " + std::to_string(n) + " nodes");
            GaussLegendre rule;
            rule.nodes.resize(n);
            rule.weights.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                gsl_integration_glfixed_point(lo, hi, i, &rule.nodes[i], &rule.weights[i], table.get());
            return rule;
        }
    }

    void normalize_trace(CMatrix &r, double target)
    {
        const double tr = r.trace().real();
        if (!(tr > 0.0) || !std::isfinite(tr))
            fail(ErrorKind::DegenerateInput, "correlation matrix has non-positive trace");
        r = hermitian_part(r) * (target / tr);
    }

    void validate(const ClusterSet &c)
    {
        require(c.cluster_count >= 1, "cluster_count must be at least 1");
        require(c.rays_per_cluster >= 1, "rays_per_cluster must be at least 1");
        require(c.angular_spread_std >= 0.0 && c.distance_spread_std >= 0.0, "spreads must be non-negative");
        require(c.average_gain >= 0.0, "average_gain must be non-negative");
        require(c.azimuth.lo <= c.azimuth.hi && c.elevation.lo <= c.elevation.hi && c.distance.lo <= c.distance.hi,
                "cluster region intervals must be ordered");
        require(in_angular_domain(c.azimuth.lo, c.elevation.lo) && in_angular_domain(c.azimuth.hi, c.elevation.hi),
                "cluster region must lie inside [-pi/2, pi/2]^2");
        require(c.distance.lo > 0.0, "cluster distances must be positive");
    }

    std::vector<ScattererLocation> draw_cluster_rays(const ClusterSet &c)
    {
        validate(c);
        Rng rng(c.seed);
        std::vector<ScattererLocation> rays;
        rays.reserve(c.cluster_count * c.rays_per_cluster);
        for (std::size_t cl = 0; cl < c.cluster_count; ++cl)
        {
            ScattererLocation centre;
            centre.azimuth = rng.uniform(c.azimuth.lo, c.azimuth.hi);
            if (c.solid_angle_weighting)
                centre.elevation = std::asin(rng.uniform(std::sin(c.elevation.lo), std::sin(c.elevation.hi)));
            else
                centre.elevation = rng.uniform(c.elevation.lo, c.elevation.hi);
            centre.distance = rng.uniform(c.distance.lo, c.distance.hi);

            for (std::size_t l = 0; l < c.rays_per_cluster; ++l)
            {
                ScattererLocation ray;
                ray.azimuth = centre.azimuth + c.angular_spread_std * rng.normal();
                ray.elevation = centre.elevation + c.angular_spread_std * rng.normal();
                ray.distance = centre.distance + c.distance_spread_std * rng.normal();
                if (ray_in_domain(ray))
                    rays.push_back(ray);
            }
        }
        return rays;
    }

    CorrelationMatrix correlation_from_rays(const SystemConfig &sys, const ArrayConfig &cfg,
                                            const std::vector<ScattererLocation> &rays)
    {
        validate(cfg);
        if (rays.empty())
            fail(ErrorKind::DegenerateInput, "every ray fell outside the scattering domain");
        std::vector<WeightedScatterer> points;
        points.reserve(rays.size());
        const double w = 1.0 / static_cast<double>(rays.size());
        for (const auto &s : rays)
            points.push_back({s, w});

        CorrelationMatrix out;
        out.entries = accumulate(sys, cfg, points);
        normalize_trace(out.entries, static_cast<double>(cfg.total()));
        out.kind = CorrelationKind::ExactClustered;
        return out;
    }

    CorrelationMatrix synthesize_cluster_correlation(const SystemConfig &sys, const ArrayConfig &cfg,
                                                     const ClusterSet &clusters)
    {
        return correlation_from_rays(sys, cfg, draw_cluster_rays(clusters));
    }

    void validate(const SubspaceIntegrationGrid &g)
    {
        if (g.quadrature == Quadrature::GaussLegendre)
            require(g.nodes_az >= 2 && g.nodes_el >= 2 && g.nodes_d >= 2, "quadrature node counts must be at least 2");
        else
            require(g.samples >= 2, "Monte Carlo quadrature needs at least 2 samples");
    }

    SubspaceIntegrationGrid effective_grid(const SystemConfig &sys, const ArrayConfig &cfg,
                                           const SubspaceIntegrationGrid &grid, const Interval &range)
    {
        SubspaceIntegrationGrid out = grid;
        if (!grid.auto_refine || grid.quadrature != Quadrature::GaussLegendre)
            return out;
        const double kl = sys.wavenumber() * cfg.aperture();
        const auto angular = static_cast<std::size_t>(std::ceil(angular_nodes_per_phase * kl + 12.0));
        out.nodes_az = std::max(out.nodes_az, angular);
        out.nodes_el = std::max(out.nodes_el, angular);
        // Fresnel phase swing across the distance interval
        const double swing = 0.5 * kl * cfg.aperture() * (1.0 / range.lo - 1.0 / range.hi);
        out.nodes_d = std::max(out.nodes_d, static_cast<std::size_t>(std::ceil(0.5 * swing + 8.0)));
        return out;
    }

    CorrelationMatrix subspace_correlation(const SystemConfig &sys, const ArrayConfig &cfg,
                                           const SubspaceIntegrationGrid &grid_in, const Interval &range)
    {
        validate(cfg);
        validate(grid_in);
        if (!(range.lo > 0.0) || !(range.lo < range.hi))
            fail(ErrorKind::InvalidArgument, "distance range must satisfy 0 < min < max");

        const SubspaceIntegrationGrid grid = effective_grid(sys, cfg, grid_in, range);
        const double half = pi / 2.0;
        std::vector<WeightedScatterer> points;

        if (grid.quadrature == Quadrature::GaussLegendre)
        {
            const GaussLegendre az = gauss_legendre(grid.nodes_az, -half, half);
            const GaussLegendre el = gauss_legendre(grid.nodes_el, -half, half);
            const GaussLegendre dd = gauss_legendre(grid.nodes_d, range.lo, range.hi);
            points.reserve(grid.nodes_az * grid.nodes_el * grid.nodes_d);
            for (std::size_t i = 0; i < grid.nodes_d; ++i)
                for (std::size_t j = 0; j < grid.nodes_el; ++j)
                {
                    const double w_el = el.weights[j] * (grid.solid_angle_weighting ? std::cos(el.nodes[j]) : 1.0);
                    for (std::size_t l = 0; l < grid.nodes_az; ++l)
                        points.push_back({{az.nodes[l], el.nodes[j], dd.nodes[i]}, az.weights[l] * w_el * dd.weights[i]});
                }
        }
        else
        {
            Rng rng(grid.seed);
            points.reserve(grid.samples);
            for (std::size_t s = 0; s < grid.samples; ++s)
            {
                ScattererLocation p;
                p.azimuth = rng.uniform(-half, half);
                p.elevation = rng.uniform(-half, half);
                p.distance = rng.uniform(range.lo, range.hi);
                points.push_back({p, grid.solid_angle_weighting ? std::cos(p.elevation) : 1.0});
            }
        }

        CorrelationMatrix out;
        out.entries = accumulate(sys, cfg, points);
        normalize_trace(out.entries, static_cast<double>(cfg.total()));
        out.kind = CorrelationKind::Subspace;
        return out;
    }

    double KronCorrelation::trace() const { return a.trace().real() * b.trace().real(); }

    RVector KronCorrelation::eigenvalues() const { return kron_eigs({hermitian_eigenvalues(a), hermitian_eigenvalues(b)}); }

    CMatrix KronCorrelation::materialize() const { return kron(a, b); }

    KronCorrelation kron_correlation(const CMatrix &r_a, const CMatrix &r_b)
    {
        require(r_a.rows() == r_a.cols() && r_b.rows() == r_b.cols(), "Kronecker factors must be square");
        return {r_a, r_b};
    }

    double FactoredCovariance::trace() const
    {
        return ris.trace().real() * ue.trace().real() * bs.trace().real();
    }

    RVector FactoredCovariance::eigenvalues() const
    {
        return kron_eigs({hermitian_eigenvalues(ris), hermitian_eigenvalues(ue), hermitian_eigenvalues(bs)});
    }

    CMatrix FactoredCovariance::materialize() const
    {
        if (dimension() > 4096)
            fail(ErrorKind::UnsupportedFastPath, "refusing to materialize a covariance of dimension " +
                                                     std::to_string(dimension()));
        return kron(kron(ris, ue), bs);
    }

    FactoredCovariance cascaded_covariance(const CMatrix &r_hr, const CMatrix &r_fr, const CMatrix &r_hu,
                                           const CMatrix &r_fb)
    {
        require(r_hr.rows() == r_hr.cols() && r_fr.rows() == r_fr.cols() && r_hu.rows() == r_hu.cols() &&
                    r_fb.rows() == r_fb.cols(),
                "cascaded covariance factors must be square");
        require(r_hr.rows() == r_fr.rows(), "RIS correlations of the two links differ in size");

        FactoredCovariance out{hermitian_part(r_hr.cwiseProduct(r_fr)), r_hu, r_fb};
        // Schur product theorem: the Hadamard factor stays PSD
        const PsdReport report = check_correlation(out.ris);
        if (!report.psd())
            fail(ErrorKind::NotPsd, "Hadamard RIS factor has min/max eigenvalue ratio " +
                                        std::to_string(report.min_eigenvalue_ratio));
        return out;
    }

    PsdReport check_correlation(const CMatrix &r)
    {
        PsdReport report;
        report.hermitian_defect = relative_hermitian_defect(r);
        const RVector eig = hermitian_eigenvalues(r);
        if (eig.size() > 0 && eig(0) > 0.0)
            report.min_eigenvalue_ratio = eig(eig.size() - 1) / eig(0);
        else if (eig.size() > 0)
            report.min_eigenvalue_ratio = eig(eig.size() - 1) < 0.0 ? -1.0 : 0.0;
        return report;
    }
}
