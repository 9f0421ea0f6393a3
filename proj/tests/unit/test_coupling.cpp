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

#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "risnf/correlation.hpp"
#include "risnf/coupling.hpp"
#include "risnf/errors.hpp"
#include "risnf/montecarlo.hpp"
#include "risnf/spectral.hpp"
#include "test_support.hpp"

using namespace risnf;

namespace
{
    const SystemConfig sys;
    const DipoleConfig dipole;
    const double lambda = sys.wavelength();
}

TEST_CASE("self impedance")
{
    const cdouble z = self_impedance(dipole, sys);
    CHECK(z.real() > 0.0);
    CHECK(z.real() == doctest::Approx(73.079).epsilon(1e-4));
    CHECK(z.imag() == doctest::Approx(42.515).epsilon(1e-4));
    const cdouble oracle = test::induced_emf_oracle(sys, 0.0, 0.0);
    CHECK(std::abs(z.real() - oracle.real()) < 0.05);
    CHECK(std::abs(z.imag() - oracle.imag()) < 0.05);
}

TEST_CASE("mutual impedance against the induced-EMF oracle")
{
    SUBCASE("side by side at half a wavelength")
    {
        const cdouble z = mutual_impedance(dipole, sys, lambda / 2, 0.0);
        CHECK(std::abs(z - test::induced_emf_oracle(sys, lambda / 2, 0.0)) < 0.1);
        CHECK(z.real() == doctest::Approx(-12.5).epsilon(0.01));
        CHECK(z.imag() == doctest::Approx(-29.9).epsilon(0.01));
    }
    SUBCASE("all arrangements")
    {
        const std::pair<double, double> cases[] = {
            {lambda / 8, 0.0}, {0.3 * lambda, 0.0}, {2.0 * lambda, 0.0},       // side by side
            {0.0, lambda / 2}, {0.0, 0.8 * lambda}, {0.0, 3.0 * lambda},       // co-linear
            {0.3 * lambda, 0.4 * lambda}, {lambda / 8, lambda / 4}, {lambda, lambda}}; // echelon
        for (const auto &[dy, dz] : cases)
        {
            const cdouble z = mutual_impedance(dipole, sys, dy, dz);
            const cdouble o = test::induced_emf_oracle(sys, dy, dz);
            CAPTURE(dy / lambda);
            CAPTURE(dz / lambda);
            CHECK(std::abs(z - o) < 1e-3);
        }
    }
    SUBCASE("overlapping co-linear pairs use the wire radius as lateral offset")
    {
        for (double dz : {lambda / 8, lambda / 5, lambda / 4})
        {
            const cdouble z = mutual_impedance(dipole, sys, 0.0, dz);
            const cdouble o = test::induced_emf_oracle(sys, dipole.wire_radius_in_wavelengths * lambda, dz);
            CHECK(std::isfinite(z.real()));
            CHECK(std::abs(z - o) < 1e-2);
        }
    }
}

TEST_CASE("mutual impedance symmetry and decay")
{
    for (const auto &[dy, dz] : {std::pair{0.3 * lambda, 0.0}, std::pair{0.0, 0.7 * lambda},
                                 std::pair{0.2 * lambda, -0.45 * lambda}})
        CHECK(mutual_impedance(dipole, sys, dy, dz) == mutual_impedance(dipole, sys, -dy, -dz));
    CHECK(std::abs(mutual_impedance(dipole, sys, 10.0 * lambda, 0.0)) <=
          std::abs(mutual_impedance(dipole, sys, lambda / 4, 0.0)));
    CHECK_THROWS_AS(mutual_impedance(dipole, sys, 0.0, 0.0), Error);
}

TEST_CASE("arrangement classification")
{
    CHECK(classify_arrangement(0.1, 0.0) == DipoleArrangement::SideBySide);
    CHECK(classify_arrangement(0.0, 0.1) == DipoleArrangement::Collinear);
    CHECK(classify_arrangement(0.1, 0.1) == DipoleArrangement::Echelon);
    CHECK(classify_arrangement(0.1, 1e-13) == DipoleArrangement::SideBySide);
}

TEST_CASE("impedance matrices")
{
    const auto single = build_impedance_matrix(dipole, sys, ArrayConfig{ArrayRole::UE, 1, 1, 0.05});
    REQUIRE(single.rows() == 1);
    CHECK(single(0, 0) == self_impedance(dipole, sys));

    const auto pair = build_impedance_matrix(dipole, sys, ArrayConfig::from_wavelengths(ArrayRole::UE, 2, 1, 0.5, sys));
    CHECK(std::abs(pair(0, 1) - cdouble(-12.5, -29.9)) < 0.1);
    CHECK(pair(0, 1) == pair(1, 0));

    const auto square = build_impedance_matrix(dipole, sys, ArrayConfig::from_wavelengths(ArrayRole::UE, 2, 2, 0.5, sys));
    std::set<std::pair<double, double>> distinct;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j)
                distinct.emplace(square(i, j).real(), square(i, j).imag());
    CHECK(distinct.size() <= 4);

    const auto big = build_impedance_matrix(dipole, sys, ArrayConfig::from_wavelengths(ArrayRole::RIS, 6, 5, 0.125, sys));
    CHECK(big == big.transpose());
}

TEST_CASE("coupling matrix")
{
    SUBCASE("diagonal impedance")
    {
        const cdouble z(50.0, 20.0);
        const auto m = coupling_matrix(CMatrix::Identity(3, 3) * z, 73.08);
        CHECK(std::abs(m.m(1, 1) - 1.0 / (z + 73.08)) < 1e-15);
        CHECK(std::abs(m.sqrt(2, 2) - 1.0 / std::sqrt(z + 73.08)) < 1e-15);
        CHECK(std::abs(m.m(0, 1)) < 1e-18);
    }
    SUBCASE("square-root defect on a dense array")
    {
        const auto m = coupling_for_array(dipole, sys, ArrayConfig::from_wavelengths(ArrayRole::RIS, 16, 16, 0.25, sys));
        CHECK(test::rel_error(m.sqrt * m.sqrt, m.m) <= 1e-8);
        CHECK(m.condition < coupling_condition_limit);
        CHECK(m.m == m.m.transpose());
    }
    SUBCASE("coupling vanishes with separation")
    {
        auto deviation = [&](double spacing)
        {
            const auto m = coupling_for_array(dipole, sys, ArrayConfig::from_wavelengths(ArrayRole::RIS, 3, 3, spacing, sys));
            const CMatrix expected = CMatrix::Identity(9, 9) / (self_impedance(dipole, sys) + dipole.dissipation_resistance);
            return (m.m - expected).cwiseAbs().maxCoeff() / std::abs(expected(0, 0));
        };
        // Mutual impedance decays like 120 / (k d) ohms
        const double at100 = deviation(100.0), at200 = deviation(200.0);
        CHECK(at100 < 2e-3);
        CHECK(at200 <= 1e-3);
        CHECK(at200 / at100 == doctest::Approx(0.5).epsilon(0.05));
    }
    SUBCASE("singular impedance is rejected")
    {
        try
        {
            coupling_matrix(-73.08 * CMatrix::Identity(2, 2), 73.08);
            FAIL("singular system accepted");
        }
        catch (const Error &e)
        {
            CHECK(e.kind() == ErrorKind::IllConditionedCoupling);
        }
    }
}

TEST_CASE("coupled correlation")
{
    const ArrayConfig array = ArrayConfig::from_wavelengths(ArrayRole::RIS, 8, 4, 0.25, sys);
    ClusterSet clusters;
    clusters.seed = 4;
    const auto r = synthesize_cluster_correlation(sys, array, clusters);

    SUBCASE("identity and scalar couplings leave R unchanged")
    {
        const auto same = coupled_correlation(r, identity_coupling(r.dimension()));
        CHECK(test::rel_error(same.entries, r.entries) < 1e-13);
        CHECK(same.with_coupling);
        const auto scaled = coupled_correlation(r, coupling_matrix(CMatrix::Identity(32, 32) * 10.0, 5.0));
        CHECK(test::rel_error(scaled.entries, r.entries) < 1e-13);
    }
    SUBCASE("Hermitian, PSD, trace preserved, rank not increased")
    {
        const auto m = coupling_for_array(dipole, sys, array);
        for (auto form : {CouplingForm::Congruence, CouplingForm::Literal})
        {
            const auto c = coupled_correlation(r, m, form);
            const auto report = check_correlation(c.entries);
            CHECK(report.hermitian());
            CHECK(report.psd());
            CHECK(c.trace() == doctest::Approx(32.0).epsilon(1e-12));
        }
        const auto c = coupled_correlation(r, m);
        CHECK(effective_rank(hermitian_eigenvalues(c.entries)).rank <= effective_rank(hermitian_eigenvalues(r.entries)).rank);
    }
    SUBCASE("vanishing coupling at wide spacing")
    {
        const ArrayConfig wide = ArrayConfig::from_wavelengths(ArrayRole::RIS, 4, 4, 100.0, sys);
        const auto rw = synthesize_cluster_correlation(sys, wide, clusters);
        const auto cw = coupled_correlation(rw, coupling_for_array(dipole, sys, wide));
        CHECK(test::rel_error(cw.entries, rw.entries) <= 1e-3);
    }
}

TEST_CASE("coupling applied to channel realizations")
{
    Rng rng(3);
    const CMatrix h = test::random_matrix(4, 2, rng);
    CHECK(test::rel_error(apply_coupling_to_channel(h, identity_coupling(4), identity_coupling(2)), h) < 1e-15);

    CMatrix zr = CMatrix::Zero(3, 3), zt = CMatrix::Zero(3, 3);
    zr.diagonal() << 10.0, 20.0, 30.0;
    zt.diagonal() << 5.0, 6.0, 7.0;
    const auto mr = coupling_matrix(zr, 1.0), mt = coupling_matrix(zt, 1.0);
    const CMatrix out = apply_coupling_to_channel(CMatrix::Identity(3, 3), mr, mt);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(out(i, i) - std::sqrt(mr.m(i, i)) * std::sqrt(mt.m(i, i))) < 1e-15);
    CHECK(std::abs(out(0, 1)) < 1e-18);
}

TEST_CASE("coupled samples follow the coupled covariance")
{
    const ArrayConfig rx = ArrayConfig::from_wavelengths(ArrayRole::RIS, 4, 2, 0.25, sys);
    const ArrayConfig tx = ArrayConfig::from_wavelengths(ArrayRole::UE, 2, 1, 0.25, sys);
    ClusterSet clusters;
    clusters.seed = 8;
    const CMatrix r_rx = synthesize_cluster_correlation(sys, rx, clusters).entries;
    clusters.seed = 9;
    const CMatrix r_tx = synthesize_cluster_correlation(sys, tx, clusters).entries;
    const auto m_rx = coupling_for_array(dipole, sys, rx), m_tx = coupling_for_array(dipole, sys, tx);

    const CMatrix expected = test::kron_oracle(m_tx.sqrt * r_tx * m_tx.sqrt.adjoint(), m_rx.sqrt * r_rx * m_rx.sqrt.adjoint());
    const auto sampler = ChannelSampler::from_correlations(r_rx, r_tx);
    Rng rng(77);
    CMatrix cov = CMatrix::Zero(16, 16);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i)
    {
        const CMatrix hm = apply_coupling_to_channel(sampler.sample(rng), m_rx, m_tx);
        const CVector v = Eigen::Map<const CVector>(hm.data(), hm.size());
        cov += v * v.adjoint();
    }
    cov /= draws;
    CHECK(test::rel_error(cov, expected) < 0.05);
}

TEST_CASE("dipole validation")
{
    DipoleConfig bad = dipole;
    bad.dissipation_resistance = 0.0;
    CHECK_THROWS_AS(validate(bad), Error);
    bad = dipole;
    bad.length_in_wavelengths = 0.3;
    try
    {
        self_impedance(bad, sys);
        FAIL("non half-wave accepted");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::UnsupportedConfiguration);
    }
}
