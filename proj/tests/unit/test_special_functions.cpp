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

#include "doctest.h"
#include "risnf/errors.hpp"
#include "risnf/special_functions.hpp"
#include "risnf/types.hpp"
#include "oracles.hpp"

using namespace risnf;

namespace
{
    using risnf::test::ci_oracle;
    using risnf::test::si_oracle;
}

TEST_CASE("reference values")
{
    CHECK(sine_integral(0.0) == 0.0);
    CHECK(sine_integral(pi) == doctest::Approx(1.8519370519824661).epsilon(1e-14));
    CHECK(cosine_integral(pi) == doctest::Approx(0.07366791204642548).epsilon(1e-13));
    CHECK(cosine_integral(2.0 * pi) == doctest::Approx(-0.022560661746346).epsilon(1e-11));
}

TEST_CASE("agreement with quadrature on a 100-point grid")
{
    double worst_si = 0.0, worst_ci = 0.0;
    for (int i = 1; i <= 100; ++i)
    {
        const double x = 0.05 + 0.3 * (i - 1); // crosses the series/continued-fraction switch
        const SiCi v = sine_cosine_integrals(x);
        worst_si = std::max(worst_si, std::abs(v.si - si_oracle(x)));
        worst_ci = std::max(worst_ci, std::abs(v.ci - ci_oracle(x)));
    }
    CHECK(worst_si < 1e-10);
    CHECK(worst_ci < 1e-10);
}

TEST_CASE("derivative relations")
{
    const double h = 1e-5;
    for (double x = 0.25; x < 40.0; x += 0.75)
    {
        const double dsi = (sine_integral(x + h) - sine_integral(x - h)) / (2.0 * h);
        const double dci = (cosine_integral(x + h) - cosine_integral(x - h)) / (2.0 * h);
        CHECK(std::abs(dsi - std::sin(x) / x) < 1e-6);
        CHECK(std::abs(dci - std::cos(x) / x) < 1e-6);
    }
}

TEST_CASE("continuity across the regime switch and large arguments")
{
    const SiCi below = sine_cosine_integrals(4.0 - 1e-12);
    const SiCi above = sine_cosine_integrals(4.0 + 1e-12);
    CHECK(std::abs(below.si - above.si) < 1e-11);
    CHECK(std::abs(below.ci - above.ci) < 1e-11);
    const SiCi far = sine_cosine_integrals(1e6);
    CHECK(far.si == doctest::Approx(pi / 2).epsilon(1e-5));
    CHECK(std::abs(far.ci) < 1e-5);
}

TEST_CASE("domain errors")
{
    try
    {
        cosine_integral(0.0);
        FAIL("Ci(0) accepted");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::Domain);
    }
    try
    {
        sine_cosine_integrals(-1.0);
        FAIL("negative argument accepted");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::InvalidArgument);
    }
}
