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
#include <complex>
#include <limits>
#include <string>

#include "risnf/errors.hpp"
#include "risnf/special_functions.hpp"
#include "risnf/types.hpp"

namespace risnf
{
    namespace
    {
        constexpr double series_limit = 4.0;

        SiCi series(double x)
        {
            const double x2 = x * x;
            double si = 0.0, ci = 0.0;

            // Si: sum (-1)^n x^(2n+1) / ((2n+1) (2n+1)!)
            double term = x; // (-1)^n x^(2n+1) / (2n+1)!
            for (int n = 0; n < 60; ++n)
            {
                const double add = term / (2.0 * n + 1.0);
                si += add;
                if (std::abs(add) < 1e-18 * std::abs(si))
                    break;
                term *= -x2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
            }

            // Ci: gamma + ln x + sum_{n>=1} (-1)^n x^(2n) / (2n (2n)!)
            term = -x2 / 2.0; // (-1)^n x^(2n) / (2n)!
            double sum = 0.0;
            for (int n = 1; n < 60; ++n)
            {
                const double add = term / (2.0 * n);
                sum += add;
                if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0))
                    break;
                term *= -x2 / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
            }
            ci = euler_gamma + std::log(x) + sum;
            return {si, ci};
        }

        // Modified Lentz evaluation of E1(ix) e^{ix}
        SiCi continued_fraction(double x)
        {
            constexpr double tiny = 1e-300;
            constexpr double eps = std::numeric_limits<double>::epsilon();
            std::complex<double> b(1.0, x);
            std::complex<double> c = 1.0 / tiny;
            std::complex<double> d = 1.0 / b;
            std::complex<double> h = d;
            for (int i = 2; i < 1000; ++i)
            {
                const double a = -static_cast<double>((i - 1) * (i - 1));
                b += 2.0;
                d = 1.0 / (a * d + b);
                c = b + a / c;
                const std::complex<double> del = c * d;
                h *= del;
                if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps)
                    break;
            }
            h *= std::complex<double>(std::cos(x), -std::sin(x));
            return {pi / 2.0 + h.imag(), -h.real()};
        }
    }

    SiCi sine_cosine_integrals(double x)
    {
        if (!std::isfinite(x) || x < 0.0)
            fail(ErrorKind::InvalidArgument, "Si/Ci need a finite non-negative argument, got " + std::to_string(x));
        if (x == 0.0)
            fail(ErrorKind::Domain, "Ci has a logarithmic singularity at 0");
        return x <= series_limit ? series(x) : continued_fraction(x);
    }

    double sine_integral(double x)
    {
        if (x == 0.0)
            return 0.0;
        return sine_cosine_integrals(x).si;
    }

    double cosine_integral(double x) { return sine_cosine_integrals(x).ci; }
}
