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

#include <cmath>
#include <set>
#include <tuple>

#include "doctest.h"
#include "risnf/errors.hpp"
#include "risnf/geometry.hpp"
#include "test_support.hpp"

using namespace risnf;

namespace
{
    SystemConfig lambda_tenth() { return make_system(speed_of_light / 0.1); }
}

TEST_CASE("element positions follow the row-major grid")
{
    const ArrayConfig a{ArrayRole::RIS, 4, 3, 0.05};
    auto p1 = element_position(a, 1);
    CHECK(p1.x == 0.0);
    CHECK(p1.y == 0.0);
    CHECK(p1.z == 0.0);
    auto p6 = element_position(a, 6);
    CHECK(p6.y == doctest::Approx(0.05));
    CHECK(p6.z == doctest::Approx(0.05));
    auto p4 = element_position(a, 4);
    CHECK(p4.y == doctest::Approx(0.15));
    CHECK(p4.z == 0.0);
    CHECK_THROWS_AS(element_position(a, 0), Error);
    CHECK_THROWS_AS(element_position(a, 13), Error);
}

TEST_CASE("element positions are distinct")
{
    const ArrayConfig a{ArrayRole::BS, 5, 4, 0.01};
    std::set<std::tuple<double, double, double>> seen;
    for (std::size_t k = 1; k <= a.total(); ++k)
    {
        const auto p = element_position(a, k);
        seen.emplace(p.x, p.y, p.z);
    }
    CHECK(seen.size() == a.total());
}

TEST_CASE("element distance")
{
    const SystemConfig sys = lambda_tenth();
    const ArrayConfig a = ArrayConfig::from_wavelengths(ArrayRole::RIS, 2, 1, 0.5, sys);
    const ScattererLocation broadside{0.0, 0.0, 10.0};
    CHECK(element_distance(sys, a, 1, broadside) == 10.0);
    CHECK(element_distance(sys, a, 2, broadside) == doctest::Approx(std::sqrt(100.0 + 0.05 * 0.05)).epsilon(1e-14));

    // Scatterer sitting on the element
    const ScattererLocation on_element{0.5 * pi, 0.0, a.spacing};
    CHECK(element_distance(sys, a, 2, on_element) == doctest::Approx(0.0).epsilon(1e-15));

    // Symmetric under swapping the two points
    const ScattererLocation s = ScattererLocation::from_degrees(30.0, -20.0, 3.0);
    const auto q = s.cartesian();
    const auto p = element_position(a, 2);
    const double forward = element_distance(sys, a, 2, s);
    const double backward = std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) + (p.z - q.z) * (p.z - q.z));
    CHECK(forward == doctest::Approx(backward).epsilon(1e-15));
}

TEST_CASE("near-field response")
{
    const SystemConfig sys = lambda_tenth();
    SUBCASE("single element is one")
    {
        const ArrayConfig a{ArrayRole::UE, 1, 1, 0.05};
        const CVector v = nearfield_response(sys, a, ScattererLocation::from_degrees(10.0, 20.0, 7.0));
        REQUIRE(v.size() == 1);
        CHECK(std::abs(v(0) - cdouble(1.0, 0.0)) < 1e-12); // rounding of k * (r - r_ref) at r = 7 m
    }
    SUBCASE("two-element closed form")
    {
        const ArrayConfig a = ArrayConfig::from_wavelengths(ArrayRole::RIS, 2, 1, 0.5, sys);
        const CVector v = nearfield_response(sys, a, ScattererLocation{0.0, 0.0, 10.0});
        const cdouble expected = std::exp(cdouble(0.0, -(2.0 * pi / 0.1) * (std::sqrt(100.0 + 0.0025) - 10.0)));
        CHECK(std::abs(v(1) - expected) < 1e-12);
        CHECK(std::abs(std::abs(v(1)) - 1.0) < 1e-15);
    }
    SUBCASE("unit modulus everywhere")
    {
        const ArrayConfig a = ArrayConfig::from_wavelengths(ArrayRole::RIS, 8, 8, 0.25, sys);
        Rng rng(3);
        for (int trial = 0; trial < 20; ++trial)
        {
            const ScattererLocation s{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(1.0, 30.0)};
            const CVector v = nearfield_response(sys, a, s);
            CHECK(v.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(v.cwiseAbs().minCoeff() == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    SUBCASE("far-field limit matches planar phases")
    {
        const ArrayConfig a = ArrayConfig::from_wavelengths(ArrayRole::RIS, 6, 5, 0.5, sys);
        for (const auto &[az, el] : {std::pair{0.0, 0.0}, std::pair{0.4, -0.3}, std::pair{-1.0, 0.7}})
        {
            const double d = 1e4 * a.aperture() * 100.0;
            const CVector v = nearfield_response(sys, a, ScattererLocation{az, el, d});
            const double uy = std::cos(el) * std::sin(az), uz = std::sin(el);
            double worst = 0.0;
            for (std::size_t k = 1; k <= a.total(); ++k)
            {
                const auto p = element_position(a, k);
                const double planar = sys.wavenumber() * (p.y * uy + p.z * uz);
                worst = std::max(worst, std::abs(std::arg(v(k - 1) * std::exp(cdouble(0.0, -planar)))));
            }
            CHECK(worst < 1e-4);
        }
    }
}

TEST_CASE("response matrix columns")
{
    const SystemConfig sys;
    const ArrayConfig a = ArrayConfig::from_wavelengths(ArrayRole::BS, 3, 2, 0.25, sys);
    const std::vector<ScattererLocation> s{{0.1, 0.2, 12.0}, {-0.4, 0.0, 15.0}};
    const CMatrix m = nearfield_response_matrix(sys, a, s);
    REQUIRE(m.cols() == 2);
    CHECK(test::rel_error(CVector(m.col(1)), nearfield_response(sys, a, s[1])) < 1e-15);
}

TEST_CASE("validation")
{
    CHECK_THROWS_AS(validate(ArrayConfig{ArrayRole::RIS, 0, 3, 0.01}), Error);
    CHECK_THROWS_AS(validate(ArrayConfig{ArrayRole::RIS, 2, 3, -0.01}), Error);
    CHECK_THROWS_AS(validate(ScattererLocation{0.0, 0.0, -1.0}), Error);
    CHECK(in_angular_domain(0.5 * pi, -0.5 * pi));
    CHECK_FALSE(in_angular_domain(0.5 * pi + 1e-9, 0.0));
}
