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
#include <functional>

#include "doctest.h"
#include "risnf/correlation.hpp"
#include "risnf/errors.hpp"
#include "risnf/spectral.hpp"
#include "test_support.hpp"

using namespace risnf;

namespace
{
    const SystemConfig sys;

    ArrayConfig ris(std::size_t h, std::size_t v, double spacing)
    {
        return ArrayConfig::from_wavelengths(ArrayRole::RIS, h, v, spacing, sys);
    }

    double leakage(const CMatrix &r, const CMatrix &basis)
    {
        const CMatrix inside = basis.adjoint() * r * basis;
        return 1.0 - inside.trace().real() / r.trace().real();
    }
}

TEST_CASE("single ray gives a rank-one correlation")
{
    const ArrayConfig cfg = ris(4, 4, 0.25);
    const ScattererLocation s = ScattererLocation::from_degrees(20.0, -10.0, 12.0);
    const auto r = correlation_from_rays(sys, cfg, {s});
    const CVector a = nearfield_response(sys, cfg, s);
    CHECK(test::rel_error(r.entries, CMatrix(a * a.adjoint())) < 1e-13);
    const RVector eig = hermitian_eigenvalues(r.entries);
    CHECK(eig(0) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(effective_rank(eig, 1e-10).rank == 1);
}

TEST_CASE("two rays split the trace by their overlap")
{
    const ArrayConfig cfg = ris(8, 1, 0.5);
    const ScattererLocation s1 = ScattererLocation::from_degrees(0.0, 0.0, 15.0);
    const ScattererLocation s2 = ScattererLocation::from_degrees(40.0, 0.0, 15.0);
    const auto r = correlation_from_rays(sys, cfg, {s1, s2});
    const cdouble rho = nearfield_response(sys, cfg, s1).dot(nearfield_response(sys, cfg, s2)) / 8.0;
    const RVector eig = hermitian_eigenvalues(r.entries);
    CHECK(eig(0) == doctest::Approx(4.0 * (1.0 + std::abs(rho))).epsilon(1e-10));
    CHECK(eig(1) == doctest::Approx(4.0 * (1.0 - std::abs(rho))).epsilon(1e-10));
    CHECK(effective_rank(eig, 1e-10).rank == 2);
}

TEST_CASE("clustered correlation at K = 1024")
{
    ClusterSet clusters;
    clusters.seed = 11;
    const auto r = synthesize_cluster_correlation(sys, ris(32, 32, 0.25), clusters);
    CHECK(r.kind == CorrelationKind::ExactClustered);
    CHECK(r.trace() == doctest::Approx(1024.0).epsilon(1e-12));
    const PsdReport report = check_correlation(r.entries);
    CHECK(report.hermitian());
    CHECK(report.psd());
}

TEST_CASE("clustered correlation is deterministic in the seed")
{
    ClusterSet clusters;
    clusters.seed = 5;
    const ArrayConfig cfg = ris(6, 6, 0.25);
    const auto a = synthesize_cluster_correlation(sys, cfg, clusters);
    const auto b = synthesize_cluster_correlation(sys, cfg, clusters);
    CHECK(a.entries == b.entries);
    clusters.seed = 6;
    const auto c = synthesize_cluster_correlation(sys, cfg, clusters);
    CHECK(test::rel_error(c.entries, a.entries) > 1e-3);
}

TEST_CASE("cluster validation")
{
    ClusterSet clusters;
    clusters.rays_per_cluster = 0;
    CHECK_THROWS_AS(draw_cluster_rays(clusters), Error);
    clusters = ClusterSet{};
    clusters.azimuth = {-2.0, 0.0};
    CHECK_THROWS_AS(draw_cluster_rays(clusters), Error);
    CHECK_THROWS_AS(correlation_from_rays(sys, ris(2, 2, 0.5), {}), Error);
}

TEST_CASE("subspace correlation quadratures agree")
{
    const ArrayConfig cfg = ris(8, 8, 0.25);
    SubspaceIntegrationGrid gl;
    SubspaceIntegrationGrid mc;
    mc.quadrature = Quadrature::MonteCarlo;
    mc.samples = 400000;
    const auto a = subspace_correlation(sys, cfg, gl, {10.0, 20.0});
    const auto b = subspace_correlation(sys, cfg, mc, {10.0, 20.0});
    CHECK(a.kind == CorrelationKind::Subspace);
    CHECK(a.trace() == doctest::Approx(64.0).epsilon(1e-12));
    CHECK(check_correlation(a.entries).psd());
    CHECK(test::rel_error(b.entries, a.entries) <= 2e-2);
}

TEST_CASE("Gauss-Legendre refinement converges monotonically")
{
    const ArrayConfig cfg = ris(8, 8, 0.5);
    auto at = [&](std::size_t n)
    {
        SubspaceIntegrationGrid g;
        g.auto_refine = false;
        g.nodes_az = g.nodes_el = n;
        g.nodes_d = 8;
        return subspace_correlation(sys, cfg, g, {10.0, 20.0}).entries;
    };
    const CMatrix reference = at(96);
    double previous = 1e300;
    for (std::size_t n : {12, 24, 48})
    {
        const double err = test::rel_error(at(n), reference);
        CAPTURE(n);
        CHECK(err <= previous);
        previous = err;
    }
    CHECK(previous < 1e-8);
}

TEST_CASE("clustered correlations lie in the subspace span")
{
    const ArrayConfig cfg = ris(16, 16, 0.25);
    const auto sub = subspace_correlation(sys, cfg, SubspaceIntegrationGrid{}, {10.0, 20.0});
    const SubspaceBasis basis = select_subspace(hermitian_eig(sub.entries), 1e-7);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        ClusterSet clusters;
        clusters.seed = seed;
        clusters.angular_spread_std = 0.0;
        clusters.distance_spread_std = 0.0;
        worst = std::max(worst, leakage(synthesize_cluster_correlation(sys, cfg, clusters).entries, basis.basis));
    }
    MESSAGE("worst leakage " << worst);
    CHECK(worst <= 1e-3);
}

TEST_CASE("Kronecker correlation")
{
    Rng rng(9);
    const CMatrix a = test::random_psd(3, 3, rng), b = test::random_psd(4, 2, rng);
    const auto k = kron_correlation(a, b);
    CHECK(test::rel_error(k.materialize(), test::kron_oracle(a, b)) < 1e-14);
    CHECK(k.trace() == doctest::Approx(12.0).epsilon(1e-12));
    const RVector eig = hermitian_eigenvalues(k.materialize());
    RVector sorted = k.eigenvalues();
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    CHECK((sorted - eig).norm() < 1e-12 * eig.norm());
    CHECK_THROWS_AS(kron_correlation(CMatrix::Zero(2, 3), b), Error);
}

TEST_CASE("cascaded covariance")
{
    Rng rng(10);
    const CMatrix r_hr = test::random_psd(5, 5, rng), r_fr = test::random_psd(5, 2, rng);
    const CMatrix r_hu = test::random_psd(2, 2, rng), r_fb = test::random_psd(3, 3, rng);
    const auto c = cascaded_covariance(r_hr, r_fr, r_hu, r_fb);
    CHECK(c.dimension() == 30);
    const CMatrix expected = test::kron_oracle(test::kron_oracle(r_hr.cwiseProduct(r_fr), r_hu), r_fb);
    CHECK(test::rel_error(c.materialize(), expected) < 1e-13);
    CHECK(c.trace() == doctest::Approx(expected.trace().real()).epsilon(1e-12));
    CHECK(check_correlation(c.ris).psd());

    const CMatrix ones = CMatrix::Ones(2, 2);
    const auto id = cascaded_covariance(CMatrix::Identity(2, 2), ones, CMatrix::Identity(1, 1), CMatrix::Identity(1, 1));
    CHECK(test::rel_error(id.ris, CMatrix::Identity(2, 2)) < 1e-15);

    CHECK_THROWS_AS(cascaded_covariance(r_hr, CMatrix::Identity(4, 4), r_hu, r_fb), Error);
}

TEST_CASE("indefinite inputs are reported")
{
    CMatrix r = CMatrix::Identity(3, 3);
    r(2, 2) = -0.5;
    CHECK_FALSE(check_correlation(r).psd());
    try
    {
        cascaded_covariance(r, CMatrix::Identity(3, 3), CMatrix::Identity(1, 1), CMatrix::Identity(1, 1));
        FAIL("indefinite factor accepted");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::NotPsd);
    }
    CMatrix skew = CMatrix::Identity(2, 2);
    skew(0, 1) = 0.5;
    CHECK_FALSE(check_correlation(skew).hermitian());
}
