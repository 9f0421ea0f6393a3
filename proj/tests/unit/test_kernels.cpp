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

#include <vector>

#include "doctest.h"
#include "risnf/kernels.hpp"
#include "test_support.hpp"

using namespace risnf;
using namespace risnf::kernels;

namespace
{
    struct Grid
    {
        std::vector<double> y, z;
        ElementGrid view() const { return {y.data(), z.data(), y.size()}; }
    };

    Grid make_grid(std::size_t n, double spacing)
    {
        Grid g;
        for (std::size_t k = 0; k < n; ++k)
        {
            g.y.push_back(static_cast<double>(k % 7) * spacing);
            g.z.push_back(static_cast<double>(k / 7) * spacing);
        }
        return g;
    }
}

TEST_CASE("level names and forcing")
{
    CHECK(simd_level_name(SimdLevel::Scalar) == "scalar");
    force_simd_level(SimdLevel::Scalar);
    CHECK(active_simd_level() == SimdLevel::Scalar);
    force_simd_level(std::nullopt);
    CHECK(active_simd_level() == detected_simd_level());
}

#ifdef RISNF_HAVE_AVX2
TEST_CASE("SIMD variants agree with the scalar reference")
{
    if (detected_simd_level() != SimdLevel::Avx2)
        return; // nothing to compare on this host
    Rng rng(11);
    // Odd sizes exercise the tails
    for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 64u, 1023u})
    {
        const Grid g = make_grid(n, 0.0125);
        for (int trial = 0; trial < 5; ++trial)
        {
            const double sx = rng.uniform(0.5, 20.0), sy = rng.uniform(-10.0, 10.0), sz = rng.uniform(-10.0, 10.0);
            const double ref = std::sqrt(sx * sx + sy * sy + sz * sz);
            std::vector<cdouble> a(n), b(n);
            scalar::steering_vector(g.view(), sx, sy, sz, ref, 2.0 * pi / 0.1, a.data());
            avx2::steering_vector(g.view(), sx, sy, sz, ref, 2.0 * pi / 0.1, b.data());
            double worst = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                worst = std::max(worst, std::abs(a[k] - b[k]));
            // FMA contraction in the distance changes the phase by a few ulp of k * r
            CHECK(worst < 8.0 * (2.0 * pi / 0.1) * (ref + 0.0125 * n) * 0x1.0p-52);
        }
        std::vector<double> phase(n);
        for (auto &p : phase)
            p = rng.uniform(-1e3, 1e3);
        std::vector<cdouble> a(n), b(n);
        scalar::cis_negative(phase.data(), n, a.data());
        avx2::cis_negative(phase.data(), n, b.data());
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(a[k] - b[k]));
        CHECK(worst < 1e-13);
    }
}
#endif

TEST_CASE("dispatching entry point follows the forced level")
{
    const Grid g = make_grid(33, 0.05);
    std::vector<cdouble> forced(33), reference(33);
    force_simd_level(SimdLevel::Scalar);
    steering_vector(g.view(), 3.0, 1.0, -2.0, std::sqrt(14.0), 20.0, forced.data());
    force_simd_level(std::nullopt);
    scalar::steering_vector(g.view(), 3.0, 1.0, -2.0, std::sqrt(14.0), 20.0, reference.data());
    for (std::size_t k = 0; k < forced.size(); ++k)
        CHECK(forced[k] == reference[k]);
}

TEST_CASE("cis of zero phase is one")
{
    std::vector<double> phase(9, 0.0);
    std::vector<cdouble> out(9);
    cis_negative(phase.data(), phase.size(), out.data());
    for (const auto &v : out)
        CHECK(std::abs(v - cdouble(1.0, 0.0)) < 1e-15);
}
