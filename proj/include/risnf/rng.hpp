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

#ifndef RISNF_RNG_HPP
#define RISNF_RNG_HPP

#include <cmath>
#include <cstdint>

#include "risnf/types.hpp"

namespace risnf
{
    // SplitMix64 generator. Substreams for trial t under master seed s start
    // from s ^ mix64(t + 0x632BE59BD9B4E019) so that every trial is
    // reproducible on its own, independent of scheduling.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

        static std::uint64_t mix64(std::uint64_t z)
        {
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            return z ^ (z >> 31);
        }

        static Rng substream(std::uint64_t master, std::uint64_t index)
        {
            return Rng(master ^ mix64(index + 0x632BE59BD9B4E019ull));
        }

        std::uint64_t next_u64()
        {
            state_ += 0x9E3779B97F4A7C15ull;
            return mix64(state_);
        }

        // Uniform on [0, 1)
        double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        // Standard normal via Box-Muller, caching the second variate
        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            double u1 = uniform();
            while (u1 <= 0.0)
                u1 = uniform();
            const double u2 = uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            spare_ = r * std::sin(2.0 * pi * u2);
            has_spare_ = true;
            return r * std::cos(2.0 * pi * u2);
        }

        // Circularly symmetric complex Gaussian with unit variance
        cdouble complex_normal()
        {
            const double re = normal();
            const double im = normal();
            return cdouble(re, im) * std::sqrt(0.5);
        }

        CMatrix complex_normal_matrix(Eigen::Index rows, Eigen::Index cols)
        {
            CMatrix out(rows, cols);
            for (Eigen::Index c = 0; c < cols; ++c)
                for (Eigen::Index r = 0; r < rows; ++r)
                    out(r, c) = complex_normal();
            return out;
        }

    private:
        std::uint64_t state_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
}

#endif
