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

#ifndef RISNF_TEST_ORACLES_HPP
#define RISNF_TEST_ORACLES_HPP

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "risnf/geometry.hpp"
#include "risnf/types.hpp"

namespace risnf::test
{
    using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 61>;

    inline constexpr double euler_gamma = 0.57721566490153286061;

    // Adaptive quadrature over unit-length pieces
    template <typename F>
    double integrate_pieces(F f, double a, double b)
    {
        double total = 0.0;
        const int pieces = std::max(1, static_cast<int>(std::ceil(b - a)));
        const double h = (b - a) / pieces;
        for (int i = 0; i < pieces; ++i)
            total += GaussKronrod::integrate(f, a + i * h, a + (i + 1) * h, 15, 1e-15);
        return total;
    }

    inline double si_oracle(double x)
    {
        return integrate_pieces([](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }, 0.0, x);
    }

    inline double ci_oracle(double x)
    {
        return euler_gamma + std::log(x) +
               integrate_pieces([](double t) { return t == 0.0 ? 0.0 : (std::cos(t) - 1.0) / t; }, 0.0, x);
    }

    // Induced-EMF mutual impedance of two parallel z-directed half-wave
    // dipoles with sinusoidal currents: lateral offset d, vertical offset h.
    // Integrates the exact near field of the first dipole along the second.
    inline cdouble induced_emf_oracle(const SystemConfig &sys, double d, double h)
    {
        const double k = sys.wavenumber();
        const double quarter = sys.wavelength() / 4.0;
        auto field = [&](double z, bool imag_part) {
            const double r1 = std::hypot(d, z - quarter), r2 = std::hypot(d, z + quarter);
            cdouble v = std::exp(cdouble(0.0, -k * r1)) / r1 + std::exp(cdouble(0.0, -k * r2)) / r2;
            v *= cdouble(0.0, 1.0) * free_space_impedance / (4.0 * pi) * std::sin(k * (quarter - std::abs(z - h)));
            return imag_part ? v.imag() : v.real();
        };
        double re = 0.0, im = 0.0;
        const double nodes[3] = {h - quarter, h, h + quarter};
        for (int s = 0; s < 2; ++s)
        {
            re += GaussKronrod::integrate([&](double z) { return field(z, false); }, nodes[s], nodes[s + 1], 15, 1e-13);
            im += GaussKronrod::integrate([&](double z) { return field(z, true); }, nodes[s], nodes[s + 1], 15, 1e-13);
        }
        return {re, im};
    }
}

#endif
